"""Corpus ingestion: DBLP-style XML and JSON-lines parsers, author resolution,
affiliation/geocode attachment and laureate lookup."""

from __future__ import annotations

import csv
import dataclasses
import html.entities
import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, Mapping
from xml.parsers import expat

from .errors import (
    DblpParseError,
    InputError,
    JsonlParseError,
    LaureateResolutionError,
    ValidationError,
)

log = logging.getLogger(__name__)

PUBLICATION_TAGS = frozenset(
    {
        "article",
        "inproceedings",
        "proceedings",
        "book",
        "incollection",
        "phdthesis",
        "mastersthesis",
    }
)
YEAR_RANGE = (1900, 2100)
CHUNK_SIZE = 1 << 16

_HOMONYM_SUFFIX = re.compile(r"\s+\d{4}$")


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    title: str
    year: int
    author_keys: tuple[str, ...]
    citation_count: int = 0

    def __post_init__(self):
        if not self.author_keys:
            raise ValueError(f"{self.paper_id}: no authors")
        if len(set(self.author_keys)) != len(self.author_keys):
            raise ValueError(f"{self.paper_id}: duplicate author keys")
        if not YEAR_RANGE[0] <= self.year <= YEAR_RANGE[1]:
            raise ValueError(f"{self.paper_id}: year {self.year} out of range")
        if self.citation_count < 0:
            raise ValueError(f"{self.paper_id}: negative citation count")

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.paper_id,
                "title": self.title,
                "year": self.year,
                "authors": list(self.author_keys),
                "n_citation": self.citation_count,
            },
            ensure_ascii=False,
        )


@dataclass
class SkipReport:
    """Tallies of records dropped (or repaired) during parsing."""

    records: int = 0
    no_authors: int = 0
    bad_year: int = 0
    duplicate_authors: int = 0

    @property
    def skipped(self) -> int:
        return self.no_authors + self.bad_year

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["skipped"] = self.skipped
        return d


def _dedupe(keys):
    seen = dict.fromkeys(keys)
    return tuple(seen), len(seen) != len(keys)


# --- DBLP XML ----------------------------------------------------------------

_PREDEFINED = {"amp", "lt", "gt", "quot", "apos"}
_ENTITY_DTD = "".join(
    f'<!ENTITY {name} "&#{cp};">\n'
    for name, cp in sorted(html.entities.name2codepoint.items())
    if name not in _PREDEFINED
).encode("ascii")


class _DblpHandler:
    def __init__(self, report: SkipReport):
        self.report = report
        self.out: list[PaperRecord] = []
        self.depth = 0
        self.pub = None
        self.field = None
        self.buf: list[str] = []

    def start(self, tag, attrs):
        self.depth += 1
        if self.depth == 2 and tag in PUBLICATION_TAGS:
            self.pub = {"key": attrs.get("key", ""), "authors": [], "title": "",
                        "year": None, "n_citation": None}
        elif self.pub is not None and self.depth == 3 and tag in (
            "author", "title", "year", "n_citation"
        ):
            self.field = tag
            self.buf = []

    def data(self, text):
        if self.field is not None:
            self.buf.append(text)

    def end(self, tag):
        if self.pub is not None:
            if self.depth == 3 and self.field == tag:
                value = " ".join("".join(self.buf).split())
                if tag == "author":
                    if value:
                        self.pub["authors"].append(value)
                else:
                    self.pub[tag] = value
                self.field = None
            elif self.depth == 2:
                self._emit(self.pub)
                self.pub = None
        self.depth -= 1

    def _emit(self, pub):
        self.report.records += 1
        if not pub["authors"]:
            self.report.no_authors += 1
            return
        try:
            year = int(pub["year"])
        except (TypeError, ValueError):
            year = None
        if year is None or not YEAR_RANGE[0] <= year <= YEAR_RANGE[1]:
            self.report.bad_year += 1
            return
        try:
            cites = max(int(pub["n_citation"] or 0), 0)
        except ValueError:
            cites = 0
        keys, had_dupes = _dedupe(pub["authors"])
        self.report.duplicate_authors += had_dupes
        self.out.append(PaperRecord(pub["key"], pub["title"], year, keys, cites))


def parse_dblp_stream(
    stream: IO[bytes], report: SkipReport | None = None, chunk_size: int = CHUNK_SIZE
) -> Iterator[PaperRecord]:
    """Incrementally parse a DBLP-style XML byte stream.

    Publication elements are the direct children of the root whose tag is in
    PUBLICATION_TAGS. HTML named entities (``&uuml;`` and friends) resolve
    without needing ``dblp.dtd``. An optional ``<n_citation>`` child supplies
    the citation count.
    """
    report = report if report is not None else SkipReport()
    handler = _DblpHandler(report)
    parser = expat.ParserCreate()
    parser.buffer_text = True
    parser.UseForeignDTD(True)
    parser.SetParamEntityParsing(expat.XML_PARAM_ENTITY_PARSING_ALWAYS)

    def external_entity(context, base, system_id, public_id):
        sub = parser.ExternalEntityParserCreate(context)
        sub.Parse(_ENTITY_DTD, True)
        return 1

    parser.ExternalEntityRefHandler = external_entity
    parser.StartElementHandler = handler.start
    parser.EndElementHandler = handler.end
    parser.CharacterDataHandler = handler.data

    seen_any = False
    while True:
        chunk = stream.read(chunk_size)
        final = not chunk
        if final and not seen_any:
            return
        seen_any = True
        try:
            parser.Parse(chunk, final)
        except expat.ExpatError as exc:
            raise DblpParseError(
                expat.ErrorString(exc.code), parser.ErrorByteIndex, exc.lineno
            ) from None
        yield from handler.out
        handler.out.clear()
        if final:
            return


# --- JSON lines --------------------------------------------------------------


def _record_from_obj(obj, line_no) -> PaperRecord | None:
    if not isinstance(obj, dict):
        raise JsonlParseError("expected a JSON object", line_no)
    for name in ("id", "title", "year", "authors"):
        if name not in obj:
            raise JsonlParseError(f"missing required field '{name}'", line_no, name)
    authors = obj["authors"]
    if not isinstance(authors, list) or not all(isinstance(a, str) for a in authors):
        raise JsonlParseError("'authors' must be a list of strings", line_no, "authors")
    year = obj["year"]
    if isinstance(year, bool) or not isinstance(year, int):
        raise JsonlParseError("'year' must be an integer", line_no, "year")
    if not YEAR_RANGE[0] <= year <= YEAR_RANGE[1]:
        raise JsonlParseError(f"'year' {year} outside {YEAR_RANGE}", line_no, "year")
    cites = obj.get("n_citation", 0)
    if cites is None:
        cites = 0
    if isinstance(cites, bool) or not isinstance(cites, int) or cites < 0:
        raise JsonlParseError(
            "'n_citation' must be a non-negative integer", line_no, "n_citation"
        )
    return str(obj["id"]), str(obj["title"]), year, authors, cites


def parse_jsonl(
    lines: Iterable[str],
    report: SkipReport | None = None,
    errors: list | None = None,
) -> Iterator[PaperRecord]:
    """Parse JSON-lines records (fields id, title, year, authors, n_citation).

    Blank lines are ignored. By default the first bad line raises
    JsonlParseError; pass a list as ``errors`` to collect them and keep going.
    Records with an empty author list are skipped and counted in ``report``.
    """
    report = report if report is not None else SkipReport()
    for line_no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise JsonlParseError(f"invalid JSON: {exc.msg}", line_no) from None
            pid, title, year, authors, cites = _record_from_obj(obj, line_no)
        except JsonlParseError as exc:
            if errors is None:
                raise
            errors.append(exc)
            continue
        report.records += 1
        keys, had_dupes = _dedupe([a.strip() for a in authors if a.strip()])
        if not keys:
            report.no_authors += 1
            continue
        report.duplicate_authors += had_dupes
        yield PaperRecord(pid, title, year, keys, cites)


# --- scholars ----------------------------------------------------------------


@dataclass
class ScholarProfile:
    scholar_id: int
    author_key: str
    display_name: str
    institution: str | None = None
    country: str | None = None
    latitude: float | None = None
    longitude: float | None = None
    n_papers: int = 0
    n_citations: int = 0
    is_laureate: bool = False


class ScholarTable:
    """Scholars indexed by dense id, with an author_key lookup."""

    def __init__(self, profiles: Iterable[ScholarProfile]):
        self.profiles = list(profiles)
        self.by_key = {p.author_key: p.scholar_id for p in self.profiles}
        if len(self.by_key) != len(self.profiles):
            raise ValidationError("duplicate author_key in scholar table")
        if any(p.scholar_id != i for i, p in enumerate(self.profiles)):
            raise ValidationError("scholar ids must be contiguous from 0")

    def __len__(self):
        return len(self.profiles)

    def __getitem__(self, i) -> ScholarProfile:
        return self.profiles[i]

    def __iter__(self):
        return iter(self.profiles)

    def replace(self, updates: Mapping[int, dict]) -> "ScholarTable":
        return ScholarTable(
            dataclasses.replace(p, **updates[p.scholar_id]) if p.scholar_id in updates else p
            for p in self.profiles
        )

    def column(self, name):
        return [getattr(p, name) for p in self.profiles]


@dataclass(frozen=True)
class ResolvedPaper:
    paper_id: str
    year: int
    authors: tuple[int, ...]
    citation_count: int


@dataclass
class Corpus:
    scholars: ScholarTable
    papers: list[ResolvedPaper]

    def author_lists(self):
        return [p.authors for p in self.papers]


def display_name(author_key: str) -> str:
    """Strip DBLP's four-digit homonym suffix ("Wei Wang 0001" -> "Wei Wang")."""
    return _HOMONYM_SUFFIX.sub("", author_key)


def resolve_authors(records: Iterable[PaperRecord]) -> Corpus:
    """Map author keys to dense ids in first-appearance order and tally
    papers/citations (each coauthor gets the paper's full citation count)."""
    ids: dict[str, int] = {}
    papers_per = []
    cites_per = []
    papers = []
    for rec in records:
        row = []
        for key in rec.author_keys:
            sid = ids.get(key)
            if sid is None:
                sid = ids[key] = len(ids)
                papers_per.append(0)
                cites_per.append(0)
            papers_per[sid] += 1
            cites_per[sid] += rec.citation_count
            row.append(sid)
        papers.append(ResolvedPaper(rec.paper_id, rec.year, tuple(row), rec.citation_count))
    table = ScholarTable(
        ScholarProfile(sid, key, display_name(key), n_papers=papers_per[sid],
                       n_citations=cites_per[sid])
        for key, sid in ids.items()
    )
    return Corpus(table, papers)


# --- geocoding ---------------------------------------------------------------


@dataclass(frozen=True)
class GeocodeRow:
    pattern: str
    country: str
    latitude: float
    longitude: float


class GeocodeTable:
    """Offline institution -> (country, lat, lon) lookup.

    Matching is case-insensitive substring search, longest pattern first.
    Anything with a ``lookup(institution) -> GeocodeRow | None`` method can
    stand in for this class.
    """

    def __init__(self, rows: Iterable[GeocodeRow]):
        self.rows = list(rows)
        seen = set()
        for r in self.rows:
            if r.pattern.casefold() in seen:
                raise ValidationError(f"duplicate geocode pattern {r.pattern!r}")
            seen.add(r.pattern.casefold())
            if not -90 <= r.latitude <= 90 or not -180 <= r.longitude <= 180:
                raise ValidationError(f"coordinates out of range for {r.pattern!r}")
        self._ordered = sorted(self.rows, key=lambda r: (-len(r.pattern), r.pattern))
        self._folded = [r.pattern.casefold() for r in self._ordered]
        self._cache: dict[str, GeocodeRow | None] = {}

    def lookup(self, institution: str) -> GeocodeRow | None:
        if institution in self._cache:
            return self._cache[institution]
        folded = institution.casefold()
        hit = next(
            (r for r, p in zip(self._ordered, self._folded) if p in folded), None
        )
        self._cache[institution] = hit
        return hit

    @classmethod
    def from_csv(cls, path) -> "GeocodeTable":
        rows = []
        with _open_text(path) as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != ["pattern", "country", "lat", "lon"]:
                raise ValidationError(
                    f"{path}: header must be pattern,country,lat,lon "
                    f"(got {reader.fieldnames})"
                )
            for i, r in enumerate(reader, 2):
                try:
                    rows.append(GeocodeRow(r["pattern"], r["country"],
                                           float(r["lat"]), float(r["lon"])))
                except (TypeError, ValueError) as exc:
                    raise ValidationError(f"{path}:{i}: {exc}") from None
        return cls(rows)


@dataclass
class AffiliationReport:
    matched: int = 0
    unmatched: int = 0
    missing: int = 0
    duplicate_rows: int = 0
    unknown_keys: int = 0


def read_affiliations(path) -> list[tuple[str, str]]:
    """CSV with header ``author_key,institution``."""
    with _open_text(path) as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or not {"author_key", "institution"} <= set(
            reader.fieldnames
        ):
            raise ValidationError(f"{path}: header must contain author_key,institution")
        return [(r["author_key"], r["institution"]) for r in reader]


def attach_affiliations(
    table: ScholarTable, affiliation_rows: Iterable[tuple[str, str]], geocoder
) -> tuple[ScholarTable, AffiliationReport]:
    report = AffiliationReport()
    latest: dict[str, str] = {}
    for key, inst in affiliation_rows:
        if key in latest:
            report.duplicate_rows += 1
        latest[key] = inst
    if report.duplicate_rows:
        log.warning("%d duplicate affiliation rows (last one wins)", report.duplicate_rows)
    updates = {}
    for key, inst in latest.items():
        sid = table.by_key.get(key)
        if sid is None:
            report.unknown_keys += 1
            continue
        hit = geocoder.lookup(inst) if inst else None
        upd = {"institution": inst or None, "country": None,
               "latitude": None, "longitude": None}
        if hit is not None:
            upd.update(country=hit.country, latitude=hit.latitude, longitude=hit.longitude)
            report.matched += 1
        else:
            report.unmatched += 1
        updates[sid] = upd
    report.missing = len(table) - len(updates)
    return table.replace(updates), report


# --- laureates ---------------------------------------------------------------


def read_name_list(path) -> list[str]:
    """One entry per line; ``#`` starts a comment; blank lines ignored."""
    names = []
    with _open_text(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                names.append(line)
    return names


def load_laureates(names: Iterable[str], table: ScholarTable) -> tuple[frozenset, ScholarTable]:
    """Resolve names (exact author_key first, then display name) to scholar ids.

    Every name must resolve to exactly one scholar; otherwise
    LaureateResolutionError lists all unresolved and ambiguous names.
    """
    by_name: dict[str, list[int]] = {}
    for p in table:
        by_name.setdefault(p.display_name.casefold(), []).append(p.scholar_id)
    ids = []
    unresolved, ambiguous = [], {}
    for name in names:
        if name in table.by_key:
            ids.append(table.by_key[name])
            continue
        hits = by_name.get(name.casefold(), [])
        if len(hits) == 1:
            ids.append(hits[0])
        elif not hits:
            unresolved.append(name)
        else:
            ambiguous[name] = [table[h].author_key for h in hits]
    if unresolved or ambiguous:
        raise LaureateResolutionError(unresolved, ambiguous)
    dupes = [sid for sid, c in Counter(ids).items() if c > 1]
    if dupes:
        raise ValidationError(
            "laureate list names the same scholar more than once: "
            + ", ".join(table[s].author_key for s in dupes)
        )
    seeds = frozenset(ids)
    return seeds, table.replace({sid: {"is_laureate": True} for sid in seeds})


# --- scholar table persistence ----------------------------------------------

SCHOLAR_COLUMNS = [
    "scholar_id", "author_key", "display_name", "institution", "country",
    "lat", "lon", "n_papers", "n_citations", "h_index", "is_laureate",
]


def write_scholar_table(table: ScholarTable, path, h_index=None) -> None:
    """``h_index`` is an optional per-scholar sequence; None/NaN entries are left blank."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SCHOLAR_COLUMNS)
        for p in table:
            h = None if h_index is None else h_index[p.scholar_id]
            w.writerow([
                p.scholar_id, p.author_key, p.display_name, p.institution or "",
                p.country or "", _opt(p.latitude), _opt(p.longitude), p.n_papers,
                p.n_citations, "" if h is None or h != h else int(h), int(p.is_laureate),
            ])


def read_scholar_table(path) -> tuple[ScholarTable, list]:
    """Inverse of write_scholar_table; returns the table and the h-index column."""
    profiles, h = [], []
    with _open_text(path) as fh:
        for r in csv.DictReader(fh):
            profiles.append(ScholarProfile(
                int(r["scholar_id"]), r["author_key"], r["display_name"],
                r["institution"] or None, r["country"] or None,
                float(r["lat"]) if r["lat"] else None,
                float(r["lon"]) if r["lon"] else None,
                int(r["n_papers"]), int(r["n_citations"]), r["is_laureate"] == "1",
            ))
            h.append(int(r["h_index"]) if r.get("h_index") else None)
    return ScholarTable(profiles), h


def _opt(x):
    return "" if x is None else repr(float(x))


def _open_text(path):
    try:
        return open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def open_corpus(path, fmt: str, report: SkipReport, errors=None) -> Iterator[PaperRecord]:
    """Iterate records from a file in format ``dblp`` or ``jsonl``."""
    if fmt == "dblp":
        try:
            fh = open(path, "rb")
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
        with fh:
            yield from parse_dblp_stream(fh, report)
    elif fmt == "jsonl":
        with _open_text(path) as fh:
            yield from parse_jsonl(fh, report, errors)
    else:
        raise ValidationError(f"unknown corpus format {fmt!r}")


def write_corpus(records: Iterable[PaperRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


def read_corpus(path) -> Corpus:
    return resolve_authors(open_corpus(Path(path), "jsonl", SkipReport()))
