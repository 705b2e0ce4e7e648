import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

    # Default seed and partition count for experiments
    SEED = int(os.getenv("LAB_SEED", "7"))
    PARTITIONS = int(os.getenv("LAB_PARTITIONS", "1"))

    # Seed of the random generator combination used by simultaneous diagonalization
    CONTEXT_SEED = int(os.getenv("LAB_CONTEXT_SEED", "20240611"))

    OSCILLATOR_LEVELS = int(os.getenv("LAB_OSCILLATOR_LEVELS", "8"))

    # Upper bound on n accepted over HTTP
    MAX_API_SAMPLES = int(os.getenv("LAB_MAX_API_SAMPLES", "1000000"))

    # Port untuk menjalankan aplikasi
    PORT = int(os.getenv("GLOBAL_PORT", "5000"))
    DEBUG = os.getenv("FLASK_DEBUG", "false").lower() == "true"

    JSON_SORT_KEYS = True
