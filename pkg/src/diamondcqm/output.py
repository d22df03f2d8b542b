"""Deterministic CSV/JSON emission.

All floats are rendered with 17 significant digits so identical configs
produce byte-identical artifacts; CSV tables carry '#'-prefixed metadata
lines, JSON reports keep insertion order.
"""

from __future__ import annotations

import sys
from typing import Any, Iterable, Mapping


def fmt(x: Any) -> str:
    """Render one cell: floats at 17 significant digits, rest via str."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, complex):
        return f"{format(x.real, '.17g')}{'+' if x.imag >= 0 else '-'}{format(abs(x.imag), '.17g')}j"
    return str(x)


def _json_render(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [
            f'{pad}  "{k}": {_json_render(v, indent + 1)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {_json_render(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, float, complex)):
        if isinstance(obj, complex):
            return f'"{fmt(obj)}"'
        return fmt(obj)
    return '"' + str(obj).replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_json(obj: Any) -> str:
    return _json_render(obj) + "\n"


def render_csv(
    columns: list[str],
    rows: Iterable[Iterable[Any]],
    metadata: Mapping[str, Any] | None = None,
) -> str:
    lines = []
    for key, value in (metadata or {}).items():
        lines.append(f"# {key}: {fmt(value)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_text(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def report_text(report: Mapping[str, Any], form: str, metadata=None) -> str:
    """A key/value report as JSON (default) or a two-column CSV."""
    if form == "json":
        return render_json(report)
    rows = [(k, v) for k, v in report.items()]
    return render_csv(["key", "value"], rows, metadata=metadata)


def table_text(columns, rows, form: str, metadata=None) -> str:
    """A table as CSV (default) or a JSON list of row objects."""
    if form == "csv":
        return render_csv(columns, rows, metadata=metadata)
    return render_json([dict(zip(columns, row)) for row in rows])
