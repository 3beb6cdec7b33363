"""Minimal sectioned key-value text format shared by the on-disk schemas.

Documents are a sequence of ``[section]`` headers followed by ``key = value``
lines. Blank lines and ``#`` comments are ignored. Section names repeat
freely (one section per record). Values are plain strings; list-valued keys
are comma separated by convention of the caller.
"""

from __future__ import annotations


def read_sections(text: str) -> list[tuple[str, dict[str, str]]]:
    sections: list[tuple[str, dict[str, str]]] = []
    current: dict[str, str] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = {}
            sections.append((line[1:-1].strip(), current))
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        if current is None:
            raise ValueError(f"line {lineno}: key-value pair outside any section")
        key, _, value = line.partition("=")
        current[key.strip()] = value.strip()
    return sections


def write_sections(sections: list[tuple[str, dict[str, str]]]) -> str:
    lines: list[str] = []
    for header, fields in sections:
        lines.append(f"[{header}]")
        for key, value in fields.items():
            lines.append(f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)


def parse_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]
