from msiq.utils.logger import Logger

logger = Logger("msiq-quant")
