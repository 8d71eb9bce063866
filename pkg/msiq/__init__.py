import logging
import os

from dotenv import find_dotenv, load_dotenv

# add devtools `debug` function to builtins
try:
    from devtools import debug
except ImportError:
    pass
else:
    __builtins__["debug"] = debug


load_dotenv(find_dotenv(usecwd=True), verbose=False)

# library modules log through the root handler; joblib workers show up by process name
logging.basicConfig(
    level=os.getenv("MSIQ_LOG_LEVEL", "INFO").upper(),
    format="[%(asctime)s][%(name)s][%(processName)s] %(levelname)s: %(message)s",
)

__version__ = "1.0.0"
