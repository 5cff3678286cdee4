import io
import logging
import re
from pathlib import Path
from typing import Optional, Tuple, Union

from ..utils.io import atomic_write_bytes
from ..utils.markdown import generate_pdf_from_md

logger = logging.getLogger(__name__)


class PDFService:
    def __init__(self, output_dir: Union[str, Path]):
        self.output_dir = Path(output_dir)

    def _sanitize_run_name(self, run_name: str) -> str:
        """Sanitize a run name for use in filenames."""
        sanitized = re.sub(r'[^\w\s-]', '', run_name).strip().replace(' ', '_')
        return sanitized.lower() or "summary"

    def generate_pdf_stream(self, markdown_content: str) -> io.BytesIO:
        """Render markdown content into an in-memory PDF positioned at its start."""
        pdf_buffer = io.BytesIO()
        generate_pdf_from_md(markdown_content, pdf_buffer)
        pdf_buffer.seek(0)
        return pdf_buffer

    def write_pdf(self, markdown_content: str, run_name: Optional[str] = None) -> Tuple[bool, Union[Path, str]]:
        """
        Generate a PDF from markdown content and write it atomically to the output directory.

        Args:
            markdown_content (str): The markdown content to convert to PDF
            run_name (str, optional): Base name of the file; defaults to "summary"

        Returns:
            tuple: (success status, written path or error message)
        """
        try:
            filename = f"{self._sanitize_run_name(run_name or 'summary')}.pdf"
            pdf_buffer = self.generate_pdf_stream(markdown_content)
            path = atomic_write_bytes(self.output_dir / filename, pdf_buffer.getvalue())
            return True, path
        except Exception as e:
            error_msg = f"Error generating PDF: {str(e)}"
            logger.error(error_msg)
            return False, error_msg
