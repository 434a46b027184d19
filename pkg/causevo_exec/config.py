import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Configuration class for environment variables"""

    # Output Settings
    @property
    def OUTPUT_BASE_PATH(self) -> str:
        """Directory that receives reports and curve measures when --out is not given"""
        return os.getenv('OUTPUT_BASE_PATH', 'output')

    @property
    def REPORT_SCHEMA(self) -> int:
        """Schema version written into every JSON document and CSV row"""
        return int(os.getenv('REPORT_SCHEMA', '1'))


CONFIG = Config()

__all__ = ["CONFIG"]
