"""Reading TimeML documents and turning their TLINKs into interval graphs."""

from __future__ import annotations

import datetime as dt
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .algebra import ALL_MASK, INVERSE_MASK, RelationSet, is_convex_mask, relation_between
from .closure import IntervalGraph, _key, saturate
from .errors import AnnotationParseError, InconsistencyError

INVERSE_RELTYPE = {
    "BEFORE": "AFTER",
    "AFTER": "BEFORE",
    "IBEFORE": "IAFTER",
    "IAFTER": "IBEFORE",
    "INCLUDES": "IS_INCLUDED",
    "IS_INCLUDED": "INCLUDES",
    "DURING": "DURING_INV",
    "DURING_INV": "DURING",
    "SIMULTANEOUS": "SIMULTANEOUS",
    "IDENTITY": "IDENTITY",
    "BEGINS": "BEGUN_BY",
    "BEGUN_BY": "BEGINS",
    "ENDS": "ENDED_BY",
    "ENDED_BY": "ENDS",
}


@dataclass
class Document:
    id: str
    events: dict[str, str] = field(default_factory=dict)
    timexes: dict[str, tuple[str, str | None]] = field(default_factory=dict)
    tlinks: list[tuple[str, str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def __eq__(self, other) -> bool:
        # warnings describe how a document was read, not what it contains
        if not isinstance(other, Document):
            return NotImplemented
        return (self.id, self.events, self.timexes, self.tlinks) == (
            other.id, other.events, other.timexes, other.tlinks,
        )


# -- relType mapping ---------------------------------------------------------


def parse_reltype_map(text: str) -> dict[str, int]:
    table = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise AnnotationParseError(f"expected 'RELTYPE rel[,rel]*', got {raw.strip()!r}", line=lineno)
        try:
            mask = RelationSet.parse(parts[1]).mask
        except ValueError as exc:
            raise AnnotationParseError(str(exc), line=lineno) from None
        if not mask or not is_convex_mask(mask):
            raise AnnotationParseError(f"{parts[0]} maps to a non-convex set", line=lineno)
        table[parts[0].upper()] = mask
    return table


def load_reltype_map(path: str | Path | None = None) -> dict[str, int]:
    """Read a relType table; ``None`` gives the bundled default."""
    if path is None:
        text = resources.files("tempreduce").joinpath("data/reltype_map.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_reltype_map(text)


DEFAULT_RELTYPES = load_reltype_map()


def map_reltype(name: str, table: Mapping[str, int] | None = None) -> RelationSet:
    table = DEFAULT_RELTYPES if table is None else table
    try:
        return RelationSet(table[name.upper()])
    except KeyError:
        accepted = ", ".join(sorted(table))
        raise ValueError(f"unknown relType {name!r}; accepted: {accepted}") from None


# -- XML -----------------------------------------------------------------------


def _text(el: ET.Element) -> str:
    return " ".join("".join(el.itertext()).split())


def parse_timeml(content: bytes | str, doc_id: str | None = None) -> Document:
    """Parse a TimeML document, resolving MAKEINSTANCE indirection.

    TLINKs whose ends do not resolve are dropped and reported in
    ``Document.warnings``.
    """
    try:
        root = ET.fromstring(content)
    except ET.ParseError as exc:
        line, col = exc.position
        reason = str(exc).split(":", 1)[0]
        raise AnnotationParseError(f"malformed TimeML: {reason}", line, col) from None

    docid_el = root.find(".//DOCID")
    if doc_id is None:
        doc_id = _text(docid_el) if docid_el is not None else ""
    doc = Document(doc_id)

    surfaces = {}
    for ev in root.iter("EVENT"):
        eid = ev.get("eid")
        if eid:
            surfaces[eid] = _text(ev)
        # some TimeML variants put the instance id on the EVENT itself
        if ev.get("eiid"):
            doc.events[ev.get("eiid")] = _text(ev)
    instances = list(root.iter("MAKEINSTANCE"))
    for mi in instances:
        eiid, eid = mi.get("eiid"), mi.get("eventID")
        if not eiid:
            doc.warnings.append("MAKEINSTANCE without eiid ignored")
            continue
        if eid not in surfaces:
            doc.warnings.append(f"MAKEINSTANCE {eiid} refers to unknown event {eid!r}")
            continue
        doc.events[eiid] = surfaces[eid]
    if not instances:
        for eid, surface in surfaces.items():
            doc.events.setdefault(eid, surface)

    for tx in root.iter("TIMEX3"):
        tid = tx.get("tid")
        if tid:
            doc.timexes[tid] = (_text(tx), tx.get("value"))

    for link in root.iter("TLINK"):
        lid = link.get("lid", "?")
        src = link.get("eventInstanceID") or link.get("timeID")
        tgt = link.get("relatedToEventInstance") or link.get("relatedToTime")
        rel = link.get("relType")
        if not (src and tgt and rel):
            doc.warnings.append(f"TLINK {lid} is missing an endpoint or relType")
            continue
        unknown = [x for x in (src, tgt) if x not in doc.events and x not in doc.timexes]
        if unknown:
            doc.warnings.append(f"TLINK {lid} refers to unknown id {', '.join(unknown)}")
            continue
        doc.tlinks.append((src, tgt, rel.upper()))
    return doc


def read_timeml(path: str | Path) -> Document:
    path = Path(path)
    doc = parse_timeml(path.read_bytes())
    if not doc.id:
        doc.id = path.stem
    return doc


def serialize_timeml(doc: Document) -> bytes:
    root = ET.Element("TimeML")
    ET.SubElement(root, "DOCID").text = doc.id
    text = ET.SubElement(root, "TEXT")
    for eiid, surface in doc.events.items():
        ET.SubElement(text, "EVENT", eid=eiid).text = surface
    for tid, (surface, value) in doc.timexes.items():
        attrs = {"tid": tid}
        if value is not None:
            attrs["value"] = value
        ET.SubElement(text, "TIMEX3", attrs).text = surface
    for eiid in doc.events:
        ET.SubElement(root, "MAKEINSTANCE", eiid=eiid, eventID=eiid)
    for n, (src, tgt, rel) in enumerate(doc.tlinks, start=1):
        attrs = {"lid": f"l{n}", "relType": rel}
        attrs["eventInstanceID" if src in doc.events else "timeID"] = src
        attrs["relatedToEventInstance" if tgt in doc.events else "relatedToTime"] = tgt
        ET.SubElement(root, "TLINK", attrs)
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


# -- dates ---------------------------------------------------------------------

_DATE_RE = re.compile(
    r"^(?P<y>\d{4})"
    r"(?:-(?:(?P<q>Q[1-4])|W(?P<w>\d{2})|(?P<m>\d{2})(?:-(?P<d>\d{2})"
    r"(?:T(?P<H>\d{2}):(?P<M>\d{2})(?::(?P<S>\d{2}))?)?)?))?$"
)


def iso_interval(value: str | None) -> tuple[dt.datetime, dt.datetime] | None:
    """Calendar interval ``[start, end)`` of a fully specified ISO value.

    Years, quarters, ISO weeks, months, days and times to the minute or
    second are understood; anything else (``PRESENT_REF``, ``XXXX``,
    seasons, durations) gives ``None``.
    """
    if not value:
        return None
    m = _DATE_RE.match(value.strip())
    if not m:
        return None
    y = int(m["y"])
    try:
        if m["q"]:
            q = int(m["q"][1])
            start = dt.datetime(y, 3 * q - 2, 1)
            end = dt.datetime(y + 1, 1, 1) if q == 4 else dt.datetime(y, 3 * q + 1, 1)
        elif m["w"]:
            start = dt.datetime.combine(dt.date.fromisocalendar(y, int(m["w"]), 1), dt.time())
            end = start + dt.timedelta(days=7)
        elif m["m"] is None:
            start, end = dt.datetime(y, 1, 1), dt.datetime(y + 1, 1, 1)
        elif m["d"] is None:
            mo = int(m["m"])
            start = dt.datetime(y, mo, 1)
            end = dt.datetime(y + 1, 1, 1) if mo == 12 else dt.datetime(y, mo + 1, 1)
        elif m["H"] is None:
            start = dt.datetime(y, int(m["m"]), int(m["d"]))
            end = start + dt.timedelta(days=1)
        elif m["S"] is None:
            start = dt.datetime(y, int(m["m"]), int(m["d"]), int(m["H"]), int(m["M"]))
            end = start + dt.timedelta(minutes=1)
        else:
            start = dt.datetime(y, int(m["m"]), int(m["d"]), int(m["H"]), int(m["M"]), int(m["S"]))
            end = start + dt.timedelta(seconds=1)
    except ValueError:
        return None
    return start, end


def timex_relation(a: str | None, b: str | None) -> RelationSet | None:
    """Allen relation between two ISO values, or ``None`` if either is vague.

    Intervals are closed at the last instant they cover, so consecutive
    days are ``b`` rather than ``m``.
    """
    ia, ib = iso_interval(a), iso_interval(b)
    if ia is None or ib is None:
        return None
    epoch = dt.datetime(1, 1, 1)

    def ends(iv):
        s, e = ((x - epoch) // dt.timedelta(seconds=1) for x in iv)
        return 2 * s, 2 * e - 1

    return RelationSet.of(relation_between(*ends(ia), *ends(ib)))


# -- conversion ----------------------------------------------------------------


@dataclass
class Conversion:
    graph: IntervalGraph
    conflicts: list[tuple[str, str]]
    warnings: list[str]


def convert(
    d: Document, include_time_time: bool = False, reltypes: Mapping[str, int] | None = None
) -> Conversion:
    """Build the interval graph of a document, keeping track of bad links."""
    warnings = list(d.warnings)
    edges: dict[tuple[str, str], int] = {}
    dead: set[tuple[str, str]] = set()

    def add(a, b, mask):
        key = _key(a, b)
        if key != (a, b):
            mask = INVERSE_MASK[mask]
        if key in dead:
            return
        new = edges.get(key, ALL_MASK) & mask
        if not new:
            dead.add(key)
            del edges[key]
        else:
            edges[key] = new

    for src, tgt, rel in d.tlinks:
        if src == tgt:
            warnings.append(f"TLINK from {src} to itself dropped")
            continue
        try:
            mask = map_reltype(rel, reltypes).mask
        except ValueError as exc:
            warnings.append(str(exc))
            continue
        add(src, tgt, mask)

    if include_time_time:
        tids = sorted(d.timexes)
        for i, a in enumerate(tids):
            for b in tids[i + 1:]:
                rel = timex_relation(d.timexes[a][1], d.timexes[b][1])
                if rel is not None:
                    add(a, b, rel.mask)

    edges = {k: m for k, m in edges.items() if m != ALL_MASK}
    nodes = set(d.events) | set(d.timexes)
    graph = IntervalGraph(nodes, edges)
    return Conversion(graph, sorted(dead), warnings)


def to_interval_graph(
    d: Document, include_time_time: bool = False, reltypes: Mapping[str, int] | None = None
) -> IntervalGraph:
    return convert(d, include_time_time, reltypes).graph


# -- corpus statistics ---------------------------------------------------------

MODES = ("raw", "time-time", "saturated", "saturated+tt")


@dataclass
class ModeStats:
    documents: int = 0
    consistent: int = 0
    avg_relations: float = 0.0
    avg_components: float = 0.0
    component_avg_size: float = 0.0
    max_component_avg_size: float = 0.0


@dataclass
class CorpusStats:
    modes: dict[str, ModeStats]

    def to_dict(self) -> dict:
        rows = {
            "Consistent annotations": "consistent",
            "Average number of relations": "avg_relations",
            "Average nb of components/text": "avg_components",
            "Component average size": "component_avg_size",
            "Max component average size": "max_component_avg_size",
        }
        out = {"Documents": {m: s.documents for m, s in self.modes.items()}}
        for label, attr in rows.items():
            out[label] = {m: round(getattr(s, attr), 6) for m, s in self.modes.items()}
        return out


def components(g: IntervalGraph) -> list[int]:
    """Sizes of connected components; isolated nodes count as size one."""
    parent = {n: n for n in g.nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in g.edge_masks():
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    sizes: dict[str, int] = {}
    for n in g.nodes:
        r = find(n)
        sizes[r] = sizes.get(r, 0) + 1
    return sorted(sizes.values(), reverse=True)


def corpus_stats(
    documents: Iterable[Document],
    modes: Iterable[str] = MODES,
    reltypes: Mapping[str, int] | None = None,
) -> CorpusStats:
    """Table-style statistics per mode.

    Raw modes are not checked for consistency, so every document counts
    as consistent there.  Saturated modes count consistent documents and
    average relation counts over them only; component figures always cover
    every document since saturation never joins components.
    """
    documents = list(documents)
    modes = list(modes)
    for m in modes:
        if m not in MODES:
            raise ValueError(f"unknown mode {m!r}; expected one of {', '.join(MODES)}")
    out = {}
    for mode in modes:
        tt = mode in ("time-time", "saturated+tt")
        sat = mode.startswith("saturated")
        st = ModeStats(documents=len(documents))
        rel_total, n_comp, comp_nodes, max_total = 0, 0, 0, 0
        for d in documents:
            g = to_interval_graph(d, tt, reltypes)
            sizes = components(g)
            n_comp += len(sizes)
            comp_nodes += sum(sizes)
            max_total += sizes[0] if sizes else 0
            if sat:
                try:
                    g = saturate(g)
                except InconsistencyError:
                    continue
            st.consistent += 1
            rel_total += len(g)
        if documents:
            st.avg_components = n_comp / len(documents)
            st.max_component_avg_size = max_total / len(documents)
        if n_comp:
            st.component_avg_size = comp_nodes / n_comp
        if st.consistent:
            st.avg_relations = rel_total / st.consistent
        out[mode] = st
    return CorpusStats(out)


def read_corpus(directory: str | Path) -> list[Document]:
    """Every ``.tml``/``.xml`` file below ``directory``, in path order."""
    paths = sorted(p for p in Path(directory).rglob("*") if p.suffix in (".tml", ".xml"))
    return [read_timeml(p) for p in paths]


def bundled_fixture(name: str = "example1") -> Document:
    data = resources.files("tempreduce").joinpath(f"data/timeml/{name}.tml").read_bytes()
    return parse_timeml(data)
