from .mongodb import MongoDBService, mongodb_from_env
from .pdf_service import PDFService

__all__ = ["MongoDBService", "PDFService", "mongodb_from_env"]
