import os
from dotenv import load_dotenv

load_dotenv()

class Settings:
    # Workspace Settings
    AINFTY_WORKDIR = os.getenv("AINFTY_WORKDIR", "artifacts")
    AINFTY_LOG_LEVEL = os.getenv("AINFTY_LOG_LEVEL", "INFO")

    # Truncation Settings
    WEIGHT_BOUND = int(os.getenv("AINFTY_WEIGHT_BOUND", "12"))
    LENGTH_BOUND = int(os.getenv("AINFTY_LENGTH_BOUND", "8"))
    CHECK_ARITY = int(os.getenv("AINFTY_CHECK_ARITY", "6"))
    CERTIFY_ARITY = int(os.getenv("AINFTY_CERTIFY_ARITY", "8"))
    SOLVER_ARITY = int(os.getenv("AINFTY_SOLVER_ARITY", "6"))
    RESOLUTION_DEPTH = int(os.getenv("AINFTY_RESOLUTION_DEPTH", "12"))
    PERIODIC_DEPTH = int(os.getenv("AINFTY_PERIODIC_DEPTH", "8"))
    SECTION4_MAX_WEIGHT = int(os.getenv("AINFTY_SECTION4_MAX_WEIGHT", "4"))

    # Artifact Settings
    SCHEMA_VERSION = "1.0"
    LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')

    @classmethod
    def bounds(cls) -> dict:
        return {
            'weight_bound': cls.WEIGHT_BOUND,
            'length_bound': cls.LENGTH_BOUND,
            'check_arity': cls.CHECK_ARITY,
            'certify_arity': cls.CERTIFY_ARITY,
            'solver_arity': cls.SOLVER_ARITY,
            'resolution_depth': cls.RESOLUTION_DEPTH,
            'periodic_depth': cls.PERIODIC_DEPTH,
            'section4_max_weight': cls.SECTION4_MAX_WEIGHT,
        }

    @classmethod
    def validate_settings(cls):
        too_small = [name for name, value in cls.bounds().items() if value < 1]
        if too_small:
            raise ValueError(f"Bounds must be positive: {', '.join(too_small)}")
        if cls.RESOLUTION_DEPTH < 2 or cls.PERIODIC_DEPTH < 2:
            raise ValueError("Resolution depths must be at least 2")
        if cls.AINFTY_LOG_LEVEL.upper() not in cls.LOG_LEVELS:
            raise ValueError(f"Invalid log level: {cls.AINFTY_LOG_LEVEL}")

settings = Settings()
