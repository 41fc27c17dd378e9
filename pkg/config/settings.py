from dotenv import load_dotenv
import os

load_dotenv()

RING_CONFIG = {
    # p^e must stay below this so every residue is an exact machine-width integer
    "max_modulus": int(os.getenv("MAX_MODULUS", 2 ** 62)),
}

ENUMERATION_CONFIG = {
    "budget": int(os.getenv("ENUMERATION_BUDGET", 10 ** 7)),
    "workers": int(os.getenv("ENUMERATION_WORKERS", 1)),
    "seed": int(os.getenv("DEFAULT_SEED", 20240601)),
    "show_progress": os.getenv("SHOW_PROGRESS", "false").lower() == "true",
}

LOGGING_CONFIG = {
    "level": os.getenv("LOG_LEVEL", "INFO").upper(),
    "log_dir": os.getenv("LOG_DIR", "logs"),
    "log_to_file": os.getenv("LOG_TO_FILE", "true").lower() == "true",
    "max_bytes": 10 * 1024 * 1024,  # 10MB
    "backup_count": 5,
}

OUTPUT_CONFIG = {
    "default_format": os.getenv("OUTPUT_FORMAT", "json"),
    "indent": 2,
}
