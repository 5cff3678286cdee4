import logging
import os
import re
from typing import List

import pandas as pd
from reportlab.lib import colors
from reportlab.lib.pagesizes import letter
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.platypus import (
    ListFlowable,
    ListItem,
    Paragraph,
    SimpleDocTemplate,
    Spacer,
    Table,
    TableStyle,
)

from ..tasks.sequence import build_sequence

logger = logging.getLogger(__name__)


def _markdown_table(frame: pd.DataFrame) -> List[str]:
    header = "| " + " | ".join(str(c) for c in frame.columns) + " |"
    rule = "| " + " | ".join("---" for _ in frame.columns) + " |"
    rows = ["| " + " | ".join(str(v) for v in row) + " |" for row in frame.itertuples(index=False)]
    return [header, rule, *rows]


def late_phase_risks(result) -> pd.DataFrame:
    """Median over seeds of each learner's mean risk per task during the last full cycle."""
    start = max(result.config.horizon - build_sequence(result.config).cycle, 0)
    rows = []
    for seed, trace in sorted(result.traces.items()):
        late = trace.frame[trace.frame["t"] >= start]
        for (learner, task), group in late.groupby(["learner", "task"], sort=False):
            rows.append({"learner": learner, "task": task, "seed": seed, "risk": group["risk"].mean()})
    per_seed = pd.DataFrame(rows)
    table = per_seed.groupby(["learner", "task"], sort=False)["risk"].median().reset_index()
    table["risk"] = table["risk"].map(lambda v: f"{v:.4f}")
    return table.rename(columns={"risk": "median late risk"})


def render_summary(result) -> str:
    """Markdown summary of a finished run."""
    config = result.config
    lines = [
        f"# Prospective learning run {result.run_id}",
        "",
        f"* **Scenario**: {config.scenario} (period {config.period}, {config.samples_per_step} sample(s) per step)",
        f"* **Protocol**: {config.protocol}",
        f"* **Learners**: {', '.join(result.learners)}",
        f"* **Seeds**: {', '.join(str(s) for s in config.seeds)}",
        f"* **Version**: {result.version}",
        "",
    ]
    if result.traces:
        lines += [
            "## Streaming risk",
            "",
            f"Risk mode: {config.risk.mode}; risk gap measured against the {config.risk.reference} reference.",
            "",
            *_markdown_table(late_phase_risks(result)),
            "",
        ]
    if result.reports:
        evaluation = config.evaluation
        lines += [
            "## Prospective learnability",
            "",
            f"Frozen protocol, epsilon={evaluation.epsilon}, delta={evaluation.delta}, "
            f"{evaluation.n_trials} trials.",
            "",
        ]
        table = pd.DataFrame([
            {
                "learner": r.learner,
                "reference": r.reference,
                "t'": r.t_prime,
                "T": r.horizon_T,
                "score": f"{r.score:.4f}",
                "verdict": "pass" if r.verdict else "fail",
                "mean risk": f"{r.mean_risk:.4f}",
                "t_bar": "-" if not r.sweep else (r.t_bar_estimate if r.t_bar_estimate is not None else "none"),
            }
            for r in result.reports
        ])
        lines += [*_markdown_table(table), ""]
    if result.files:
        lines += ["## Files", "", *[f"* {path.name}" for path in result.files], ""]
    return "\n".join(lines)


def get_custom_styles():
    styles = getSampleStyleSheet()
    return {
        "Title": ParagraphStyle(
            "Title", parent=styles["Heading1"], fontSize=18, textColor=colors.black, spaceAfter=12
        ),
        "Heading2": ParagraphStyle(
            "Heading2",
            parent=styles["Heading2"],
            fontSize=14,
            textColor=colors.black,
            spaceBefore=12,
            spaceAfter=6,
            fontName="Helvetica-Bold",
        ),
        "Normal": ParagraphStyle(
            "Normal", parent=styles["Normal"], fontSize=10, textColor=colors.black, spaceBefore=2, spaceAfter=2
        ),
        "ListItem": ParagraphStyle(
            "ListItem",
            parent=styles["Normal"],
            fontSize=10,
            textColor=colors.black,
            spaceBefore=2,
            spaceAfter=2,
            leftIndent=10,
        ),
    }


def _inline(text: str) -> str:
    text = text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    return re.sub(r"\*\*(.*?)\*\*", r"<b>\1</b>", text)


def _list_flowable(items: List[str], style) -> ListFlowable:
    return ListFlowable(
        [ListItem(Paragraph(item, style)) for item in items],
        bulletType="bullet",
        leftIndent=10,
        bulletFontName="Helvetica",
        bulletFontSize=10,
        bulletDedent=10,
    )


def _table_flowable(rows: List[str]) -> Table:
    cells = [[c.strip() for c in row.strip().strip("|").split("|")] for row in rows]
    cells = [row for row in cells if not all(re.fullmatch(r"-{3,}", c) for c in row)]
    table = Table(cells, hAlign="LEFT")
    table.setStyle(TableStyle([
        ("FONTNAME", (0, 0), (-1, 0), "Helvetica-Bold"),
        ("FONTSIZE", (0, 0), (-1, -1), 9),
        ("GRID", (0, 0), (-1, -1), 0.5, colors.grey),
        ("BACKGROUND", (0, 0), (-1, 0), colors.HexColor("#eeeeee")),
    ]))
    return table


def generate_pdf_from_md(markdown_content: str, output_pdf) -> None:
    """Convert a run summary in markdown to PDF.

    Handles headings, bullet lists, bold text and pipe tables, which is all
    :func:`render_summary` produces.

    Args:
        markdown_content (str): The markdown content to convert to PDF
        output_pdf: Either a file path string or a BytesIO object
    """
    if isinstance(output_pdf, str):
        os.makedirs(os.path.dirname(os.path.abspath(output_pdf)), exist_ok=True)

    doc = SimpleDocTemplate(output_pdf, pagesize=letter, rightMargin=40, leftMargin=40, topMargin=40, bottomMargin=40)
    styles = get_custom_styles()
    story = []
    list_items: List[str] = []
    table_rows: List[str] = []

    def flush():
        if list_items:
            story.append(_list_flowable(list(list_items), styles["ListItem"]))
            list_items.clear()
        if table_rows:
            story.append(_table_flowable(list(table_rows)))
            table_rows.clear()

    for raw in markdown_content.replace("\r\n", "\n").split("\n"):
        line = raw.strip()
        if line.startswith("|"):
            table_rows.append(line)
            continue
        if line.startswith("* "):
            list_items.append(_inline(line[2:]))
            continue
        flush()
        if not line:
            story.append(Spacer(1, 6))
        elif line.startswith("# "):
            story.append(Paragraph(_inline(line[2:]), styles["Title"]))
        elif line.startswith("## "):
            story.append(Paragraph(_inline(line[3:]), styles["Heading2"]))
        else:
            story.append(Paragraph(_inline(line), styles["Normal"]))
    flush()

    doc.build(story)
    logger.info(f"Successfully generated PDF: {output_pdf}")
