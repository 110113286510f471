"""
MEDLINE (PubMed "tagged") export parser.

Format, as produced by PubMed "Send to > File > MEDLINE":

  - records are separated by one or more blank lines;
  - a field line is a left-justified tag padded to four characters,
    then "- " and the value ("PMID- 1566067", "MH  - Animals");
  - continuation lines start with whitespace (usually six spaces);
  - repeatable fields (AU, MH, ...) use one tag per value.

Only the tags needed downstream are lifted into attributes; everything else
lands in ``other_fields`` verbatim.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .report import Report, ensure

_TAG_LINE = re.compile(r"^([A-Z][A-Z0-9]{0,3})\s*-\s?(.*)$")
_YEAR = re.compile(r"\b(1[5-9]\d\d|20\d\d|2100)\b")

_LIFTED = {"PMID", "TI", "JT", "TA", "DP", "AU", "MH"}


class MedlineDecodeError(ValueError):
    def __init__(self, offset: int, reason: str) -> None:
        super().__init__(f"undecodable input at byte offset {offset}: {reason}")
        self.offset = offset


@dataclass(frozen=True)
class MedlineRecord:
    pmid: str
    title: str = ""
    journal_title: str = ""
    journal_abbrev: str = ""
    pub_year: int | None = None
    authors: tuple[str, ...] = ()
    mesh_raw: tuple[str, ...] = ()
    other_fields: dict[str, tuple[str, ...]] = field(default_factory=dict, compare=False)

    def first(self, tag: str) -> str | None:
        values = self.other_fields.get(tag)
        return values[0] if values else None


@dataclass(frozen=True)
class MeshHeading:
    descriptor: str
    qualifiers: tuple[str, ...] = ()
    is_major: bool = False

    def term(self, keep_qualifiers: bool = False) -> list[str]:
        """Vocabulary entries contributed by this heading."""
        if keep_qualifiers and self.qualifiers:
            return [f"{self.descriptor}/{q}" for q in self.qualifiers]
        return [self.descriptor]


def decode(data: bytes | str, fallback: bool = True, report: Report | None = None) -> str:
    """UTF-8 first; Latin-1 if that fails and *fallback* is on."""
    if isinstance(data, str):
        return data
    try:
        text = data.decode("utf-8-sig")
        encoding = "utf-8"
    except UnicodeDecodeError as exc:
        if not fallback:
            raise MedlineDecodeError(exc.start, exc.reason) from None
        text = data.decode("latin-1")
        encoding = "latin-1"
    if report is not None:
        report.set("encoding", encoding)
    return text


def _split_blocks(text: str) -> list[list[str]]:
    blocks: list[list[str]] = []
    current: list[str] = []
    for line in text.splitlines():
        if line.strip():
            current.append(line.rstrip())
        elif current:
            blocks.append(current)
            current = []
    if current:
        blocks.append(current)
    return blocks


def _fields(lines: list[str]) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    for line in lines:
        if line[:1].isspace():
            if out:
                tag, value = out[-1]
                piece = line.strip()
                out[-1] = (tag, f"{value} {piece}" if value else piece)
            continue
        m = _TAG_LINE.match(line)
        if m is None:
            # stray text without a tag; treat as a continuation
            if out:
                tag, value = out[-1]
                out[-1] = (tag, f"{value} {line.strip()}")
            continue
        out.append((m.group(1), m.group(2).strip()))
    return out


def _year(dp: str | None) -> int | None:
    if not dp:
        return None
    m = _YEAR.search(dp)
    return int(m.group(1)) if m else None


def parse_medline(data: bytes | str, report: Report | None = None, *, fallback: bool = True) -> list[MedlineRecord]:
    """Parse a MEDLINE export into records, in file order.

    Blocks without a PMID and repeated PMIDs are skipped and logged in
    *report*; neither stops the parse.
    """
    report = ensure(report)
    text = decode(data, fallback=fallback, report=report)
    records: list[MedlineRecord] = []
    seen: set[str] = set()

    for index, block in enumerate(_split_blocks(text)):
        values: dict[str, list[str]] = {}
        for tag, value in _fields(block):
            values.setdefault(tag, []).append(value)
        pmids = values.get("PMID")
        if not pmids or not pmids[0].strip():
            report.error("parse-medline", "block without PMID skipped", block=index, first_line=block[0][:80])
            continue
        pmid = pmids[0].strip()
        if pmid in seen:
            report.warn("parse-medline", f"duplicate PMID {pmid}; keeping first occurrence", block=index)
            continue
        seen.add(pmid)

        def one(tag: str) -> str:
            v = values.get(tag)
            return v[0] if v else ""

        records.append(
            MedlineRecord(
                pmid=pmid,
                title=one("TI"),
                journal_title=one("JT"),
                journal_abbrev=one("TA"),
                pub_year=_year(one("DP")),
                authors=tuple(values.get("AU", ())),
                mesh_raw=tuple(values.get("MH", ())),
                other_fields={k: tuple(v) for k, v in values.items() if k not in _LIFTED},
            )
        )
    report.count("medline_records", len(records))
    return records


def parse_mesh_heading(raw: str) -> MeshHeading:
    parts = [p.strip() for p in raw.split("/")]
    major = "*" in raw
    parts = [p.replace("*", "").strip() for p in parts]
    descriptor, qualifiers = parts[0], tuple(p for p in parts[1:] if p)
    return MeshHeading(descriptor, qualifiers, major)


def extract_mesh(record: MedlineRecord, keep_qualifiers: bool = False) -> list[MeshHeading]:
    """MeSH headings of *record*, asterisks removed, first occurrence kept.

    Duplicates are judged on the descriptor alone unless *keep_qualifiers*
    is set, in which case descriptor and qualifier list must both match.
    """
    out: list[MeshHeading] = []
    seen: set[object] = set()
    for raw in record.mesh_raw:
        heading = parse_mesh_heading(raw)
        if not heading.descriptor:
            continue
        key = (heading.descriptor, heading.qualifiers) if keep_qualifiers else heading.descriptor
        if key in seen:
            continue
        seen.add(key)
        out.append(heading)
    return out
