from .io import atomic_write_bytes, atomic_write_frame, atomic_write_json, atomic_write_text
from .markdown import generate_pdf_from_md, render_summary
from .checkpoint import load_checkpoint, save_checkpoint
