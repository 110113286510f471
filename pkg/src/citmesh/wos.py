"""
Web of Science "plain text" export parser.

Layout::

    FN Clarivate Analytics Web of Science
    VR 1.0
    PT J
    AU Zhang, CL
       Li, X
    ...
    CR Hardy J, 1992, SCIENCE, V256, P184, DOI 10.1126/science.1566067
       Selkoe DJ, 1991, NEURON, V6, P487
    TC 16
    ER

    EF

Two-letter tags start in column 0; continuation lines are indented three
spaces and, for CR and AU, each continuation line is a separate value.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .medline import decode
from .report import Report, ensure

_TAG_LINE = re.compile(r"^([A-Z][A-Z0-9])(?: (.*))?$")
_MULTI_LINE_VALUES = {"AU", "AF", "CR", "C1", "ED", "BE"}

_VOLUME = re.compile(r"^V(\d[\w.-]*)$")
# page tokens must carry a digit, otherwise one-word journals (PAIN, VIROLOGY)
# would be read as pages/volumes
_PAGE = re.compile(r"^P([A-Z]{0,3}\d[\w.-]*)$")
_YEAR = re.compile(r"^\d{4}$")
_DOI = re.compile(r"^DOI\s+(.+)$", re.IGNORECASE)


@dataclass(frozen=True)
class WosRecord:
    ut: str = ""
    pmid: str | None = None
    first_author: str = ""
    all_authors: tuple[str, ...] = ()
    pub_year: int | None = None
    journal_abbrev_29: str = ""
    volume: str | None = None
    begin_page: str | None = None
    times_cited: int = 0
    cited_refs_raw: tuple[str, ...] = ()
    other_fields: dict[str, tuple[str, ...]] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class CitedReference:
    raw: str
    author: str | None = None
    year: int | None = None
    journal: str | None = None
    volume: str | None = None
    page: str | None = None
    doi: str | None = None

    def reconstruct(self) -> str:
        parts = [self.author, str(self.year) if self.year is not None else None, self.journal]
        parts.append(f"V{self.volume}" if self.volume else None)
        parts.append(f"P{self.page}" if self.page else None)
        if self.doi:
            parts.append(f"DOI {self.doi}")
        return ", ".join(p for p in parts if p)


def _to_int(value: str | None) -> int | None:
    if value is None:
        return None
    value = value.strip()
    return int(value) if value.isdigit() else None


def parse_wos(data: bytes | str, report: Report | None = None) -> list[WosRecord]:
    report = ensure(report)
    text = decode(data, report=report)
    lines = text.splitlines()

    first = next((ln for ln in lines if ln.strip()), "")
    if not first.startswith("FN"):
        report.warn("parse-wos", "missing FN header line")

    records: list[WosRecord] = []
    fields: dict[str, list[str]] | None = None
    tag: str | None = None

    def close(lineno: int, terminated: bool) -> None:
        nonlocal fields
        if fields is None:
            return
        if not terminated:
            report.warn("parse-wos", "record without ER terminator emitted", line=lineno)
        records.append(_build(fields, report))
        fields = None

    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        if line.startswith("   ") or line.startswith("\t"):
            if fields is None or tag is None:
                continue
            value = line.strip()
            if tag in _MULTI_LINE_VALUES:
                fields[tag].append(value)
            else:
                fields[tag][-1] = f"{fields[tag][-1]} {value}".strip()
            continue
        m = _TAG_LINE.match(line.rstrip())
        if m is None:
            report.warn("parse-wos", "unrecognised line ignored", line=lineno, text=line[:80])
            continue
        tag, value = m.group(1), (m.group(2) or "").strip()
        if tag in ("FN", "VR") and fields is None:
            tag = None
            continue
        if tag == "ER":
            close(lineno, True)
            tag = None
            continue
        if tag == "EF":
            close(lineno, False)
            tag = None
            continue
        if tag == "PT" and fields is not None:
            close(lineno, False)
        if fields is None:
            fields = {}
        fields.setdefault(tag, []).append(value)
    close(len(lines), False)

    report.count("wos_records", len(records))
    return records


def _build(fields: dict[str, list[str]], report: Report) -> WosRecord:
    def one(tag: str) -> str | None:
        v = fields.get(tag)
        return v[0].strip() if v and v[0].strip() else None

    authors = tuple(a for a in fields.get("AU", ()) if a)
    tc = one("TC")
    times_cited = _to_int(tc)
    if tc is not None and times_cited is None:
        report.warn("parse-wos", f"non-numeric TC {tc!r} read as 0", ut=one("UT"))
    return WosRecord(
        ut=one("UT") or "",
        pmid=one("PM"),
        first_author=authors[0] if authors else "",
        all_authors=authors,
        pub_year=_to_int(one("PY")),
        journal_abbrev_29=one("J9") or "",
        volume=one("VL"),
        begin_page=one("BP"),
        times_cited=times_cited or 0,
        cited_refs_raw=tuple(r.strip() for r in fields.get("CR", ()) if r.strip()),
        other_fields={k: tuple(v) for k, v in fields.items()},
    )


def parse_cited_reference(raw: str) -> CitedReference:
    """Tokenise a WoS CR string ("Author, Year, JOURNAL, Vvol, Ppage, DOI x").

    Total: anything that does not fit simply leaves fields unset.
    """
    doi = None
    body = raw
    # the DOI part may itself contain ", " (bracketed DOI lists)
    cut = re.search(r"(?:^|, )DOI ", raw, re.IGNORECASE)
    if cut is not None:
        body = raw[: cut.start()]
        doi_text = raw[cut.end():].strip()
        if doi_text.startswith("["):
            doi_text = doi_text.strip("[]").split(",")[0].strip()
        doi = doi_text or None

    tokens = [t.strip() for t in body.split(", ")] if body else []
    tokens = [t for t in tokens if t]
    if len(tokens) < 2:
        if doi is None:
            return CitedReference(raw=raw)
        return CitedReference(raw=raw, author=tokens[0] if tokens else None, doi=doi)

    author = tokens[0]
    year = None
    rest_start = 1
    if _YEAR.match(tokens[1]):
        y = int(tokens[1])
        if 1500 <= y <= 2100:
            year = y
        rest_start = 2

    volume = page = journal = None
    rest = tokens[rest_start:]
    for tok in rest:
        if volume is None and (m := _VOLUME.match(tok)):
            volume = m.group(1)
        elif page is None and (m := _PAGE.match(tok)):
            page = m.group(1)

    if rest:
        candidate = rest[0]
        plausible = not (candidate.isdigit() or _VOLUME.match(candidate) or _PAGE.match(candidate) or _DOI.match(candidate))
        if plausible and (year is not None or volume is not None or page is not None):
            journal = candidate.upper().strip()

    return CitedReference(raw=raw, author=author, year=year, journal=journal, volume=volume, page=page, doi=doi)


def referenced_journal(ref: CitedReference) -> str | None:
    return ref.journal.upper() if ref.journal else None
