import os
import sys
import logging
import platform
from datetime import datetime
from logging.handlers import RotatingFileHandler
from config.settings import LOGGING_CONFIG

# Configure root logger
root_logger = logging.getLogger()
root_logger.setLevel(getattr(logging, LOGGING_CONFIG["level"], logging.INFO))

# Console handler; stdout is reserved for command output
use_utf8 = platform.system() != 'Windows'
if use_utf8:
    console_handler = logging.StreamHandler(sys.stderr)
else:
    class ASCIIStreamHandler(logging.StreamHandler):
        def emit(self, record):
            try:
                msg = self.format(record)
                msg = msg.replace('≡', '==').replace('η', 'eta').replace('δ', 'delta')
                stream = self.stream
                stream.write(msg + self.terminator)
                self.flush()
            except Exception:
                self.handleError(record)
    console_handler = ASCIIStreamHandler(sys.stderr)

console_handler.setLevel(logging.WARNING)
console_format = logging.Formatter('%(levelname)s - %(name)s - %(message)s')
console_handler.setFormatter(console_format)
root_logger.addHandler(console_handler)

log_file = None
if LOGGING_CONFIG["log_to_file"]:
    logs_dir = LOGGING_CONFIG["log_dir"]
    if not os.path.isabs(logs_dir):
        logs_dir = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), logs_dir)
    os.makedirs(logs_dir, exist_ok=True)

    log_file = os.path.join(logs_dir, f'ringseq_{datetime.now().strftime("%Y%m%d")}.log')

    file_handler = RotatingFileHandler(
        log_file,
        maxBytes=LOGGING_CONFIG["max_bytes"],
        backupCount=LOGGING_CONFIG["backup_count"],
        encoding='utf-8'
    )
    file_handler.setLevel(logging.DEBUG)
    file_format = logging.Formatter('%(asctime)s - %(levelname)s - %(name)s - %(message)s')
    file_handler.setFormatter(file_format)
    root_logger.addHandler(file_handler)


def get_logger(name):
    """
    Get a logger with the specified name.

    Args:
        name (str): The name of the logger, typically __name__ of the calling module.

    Returns:
        logging.Logger: A configured logger instance.
    """
    return logging.getLogger(name)


def set_verbose(verbose: bool):
    """Route DEBUG records to the console as well (the CLI's -v flag)."""
    level = logging.DEBUG if verbose else logging.WARNING
    console_handler.setLevel(level)
    if verbose:
        root_logger.setLevel(logging.DEBUG)


if __name__ == "__main__":
    logger = get_logger(__name__)
    logger.debug("Debug message")
    logger.info("Info message")
    logger.warning("Warning message")
    logger.error("Error message")
    print(f"Log file: {log_file}")
