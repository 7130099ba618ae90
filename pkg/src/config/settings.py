from pydantic import BaseSettings, Field
from typing import Optional
from pathlib import Path
from dotenv import load_dotenv

load_dotenv(dotenv_path=Path(".") / ".env")

class Settings(BaseSettings):
    """
    Configuration settings for the vertex trace-identity toolkit.
    """

    LOG_LEVEL: str = Field("WARNING", env="LOG_LEVEL")
    """
    Logging level for the toolkit.  Defaults to 'WARNING' so reports on stdout stay clean.
    """

    LOG_FILE: Optional[str] = Field(None, env="LOG_FILE")
    """
    Path to the log file. If not set, logs go to stderr only.
    """

    LOG_FILE_MAX_SIZE: int = Field(10000000, env="LOG_FILE_MAX_SIZE")
    """
    Maximum size of the log file in bytes before rotating.  Defaults to 10MB.
    """

    LOG_FILE_BACKUP_COUNT: int = Field(5, env="LOG_FILE_BACKUP_COUNT")
    """
    Number of backup log files to keep. Defaults to 5.
    """

    DEFAULT_JOBS: int = Field(1, env="DEFAULT_JOBS")
    """
    Worker processes used for independent partition terms when --jobs is not given.
    """

    CUTOFF_MARGIN: int = Field(1, env="CUTOFF_MARGIN")
    """
    Extra energy added to every derived Fock space cutoff.
    """

    SLACK_RETRIES: int = Field(4, env="SLACK_RETRIES")
    """
    How many times a windowed builder may widen its working window before giving up.
    """

    BOX_STABILITY_CHECK: bool = Field(False, env="BOX_STABILITY_CHECK")
    """
    Re-run every 3D partition enumeration with a larger bounding box and fail on any difference.
    """

    TOOL_VERSION: str = Field("1.0.0", env="TOOL_VERSION")
    """
    Version string embedded in every report.
    """

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"

settings = Settings()
