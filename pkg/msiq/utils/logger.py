import logging
import logging.handlers
import os
from pathlib import Path


class Logger:
    """
    Named logger writing to the console and to a rotating log file.

    The log directory is `$MSIQ_LOG_DIR` when set, `/var/log/msiq` when running as root
    and `/tmp/msiq-logs` otherwise.
    """

    def __init__(self, name: str, *, level: int = logging.INFO, log_file: bool = True):
        """
        Initialize the logger with a specific name and level.

        Args:
            name: Name of the logger (appears in log output)
            level: Minimum logging level
            log_file: If True, also write to a rotating file
        """
        self.name = name

        self.logger = logging.getLogger(name)
        self.logger.setLevel(level)

        # Prevent the log messages from being handled by parent loggers
        self.logger.propagate = False

        for handler in self.logger.handlers[:]:
            self.logger.removeHandler(handler)

        formatter = logging.Formatter("[%(asctime)s][%(name)s][%(processName)s] %(levelname)s: %(message)s")

        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        self.logger.addHandler(console_handler)

        if log_file:
            log_dir = self.log_dir()
            try:
                log_dir.mkdir(parents=True, exist_ok=True)
                file_handler = logging.handlers.RotatingFileHandler(
                    log_dir / f"{name}.log",
                    maxBytes=10 * 1024 * 1024,
                    backupCount=5,
                )
            except OSError as exc:
                self.logger.warning(f"File logging disabled: {exc}")
            else:
                file_handler.setLevel(level)
                file_handler.setFormatter(formatter)
                self.logger.addHandler(file_handler)

    @staticmethod
    def log_dir() -> Path:
        if env_dir := os.getenv("MSIQ_LOG_DIR"):
            return Path(env_dir)
        if os.geteuid() == 0:
            return Path("/var/log/msiq")
        return Path("/tmp/msiq-logs")

    def debug(self, message):
        """Log a debug message"""
        self.logger.debug(message)

    def info(self, message):
        """Log an info message"""
        self.logger.info(message)

    def warning(self, message):
        """Log a warning message"""
        self.logger.warning(message)

    def error(self, message):
        """Log an error message"""
        self.logger.error(message)

    def setLevel(self, level: int):
        """
        Set the logging level for the logger.

        Args:
            level: The logging level to set
        """
        self.logger.setLevel(level)
        for handler in self.logger.handlers:
            handler.setLevel(level)
