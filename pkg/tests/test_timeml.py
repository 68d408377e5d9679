import pytest

from tempreduce.algebra import RelationSet, invert
from tempreduce.errors import AnnotationParseError
from tempreduce.metrics import evaluate
from tempreduce.timeml import (
    DEFAULT_RELTYPES,
    INVERSE_RELTYPE,
    Document,
    bundled_fixture,
    components,
    convert,
    corpus_stats,
    iso_interval,
    load_reltype_map,
    map_reltype,
    parse_timeml,
    read_corpus,
    serialize_timeml,
    timex_relation,
    to_interval_graph,
)


def tml(body: str) -> bytes:
    return f"<TimeML><DOCID>d</DOCID>{body}</TimeML>".encode()


def test_bundled_example_parses():
    d = bundled_fixture()
    assert d.id == "example1"
    assert set(d.events) == {"e1", "e2", "e3"}
    assert d.tlinks == [("e1", "e2", "BEFORE"), ("e3", "t1", "ENDED_BY")]
    g = to_interval_graph(d)
    assert g.relation("e1", "e2") == RelationSet.parse("b")
    assert g.relation("e3", "t1") == RelationSet.parse("fi")


def test_bundled_example_evaluates():
    g = to_interval_graph(bundled_fixture())
    r = evaluate(g, g)
    assert r.TR == 1 and r.TP == 1


def test_round_trip_is_fixed_point():
    d = bundled_fixture()
    again = parse_timeml(serialize_timeml(d))
    assert again == d
    assert parse_timeml(serialize_timeml(again)) == again


def test_makeinstance_indirection():
    d = parse_timeml(tml(
        '<EVENT eid="e1">ran</EVENT><EVENT eid="e2">fell</EVENT>'
        '<MAKEINSTANCE eiid="ei1" eventID="e1"/><MAKEINSTANCE eiid="ei2" eventID="e2"/>'
        '<TLINK lid="l1" eventInstanceID="ei1" relatedToEventInstance="ei2" relType="IBEFORE"/>'
    ))
    assert d.events == {"ei1": "ran", "ei2": "fell"}
    assert to_interval_graph(d).relation("ei1", "ei2") == RelationSet.parse("m")


def test_no_tlinks_is_valid():
    d = parse_timeml(tml('<EVENT eid="e1">ran</EVENT>'))
    assert d.tlinks == [] and not d.warnings
    assert len(to_interval_graph(d)) == 0


def test_unknown_reference_is_dropped_with_warning():
    d = parse_timeml(tml(
        '<EVENT eid="e1">ran</EVENT>'
        '<TLINK lid="l9" eventInstanceID="e1" relatedToEventInstance="e7" relType="BEFORE"/>'
    ))
    assert d.tlinks == []
    assert any("e7" in w for w in d.warnings)


def test_malformed_xml_reports_location():
    with pytest.raises(AnnotationParseError) as info:
        parse_timeml(b"<TimeML>\n<EVENT eid='e1'>ran</TimeML>")
    assert info.value.line == 2


def test_reltype_map():
    assert map_reltype("BEFORE") == RelationSet.parse("b")
    assert map_reltype("SIMULTANEOUS") == RelationSet.parse("e")
    assert map_reltype("DURING") == RelationSet.parse("d")
    with pytest.raises(ValueError, match="accepted"):
        map_reltype("OVERLAPPED_BY")


def test_reltype_inverses():
    for name, inv in INVERSE_RELTYPE.items():
        assert invert(map_reltype(name)) == map_reltype(inv)
    assert set(INVERSE_RELTYPE) == set(DEFAULT_RELTYPES)


def test_reltype_override_file(tmp_path):
    path = tmp_path / "map.txt"
    path.write_text("DURING e\nBEFORE b,m\n")
    table = load_reltype_map(path)
    assert map_reltype("during", table) == RelationSet.parse("e")
    path.write_text("BEFORE b,bi\n")
    with pytest.raises(AnnotationParseError):
        load_reltype_map(path)


@pytest.mark.parametrize(
    "a, b, rel",
    [
        ("1998-01-01", "1998-01-02", "b"),
        ("1998", "1998-01-01", "si"),
        ("1998", "1998-06", "di"),
        ("1998-Q4", "1998-12", "fi"),
        ("1998-02-03", "1998-02-03", "e"),
        ("1998-02-03T10:00", "1998-02-03", "d"),
        ("1997", "1998", "b"),
    ],
)
def test_timex_relations(a, b, rel):
    assert timex_relation(a, b) == RelationSet.parse(rel)


@pytest.mark.parametrize("value", ["PRESENT_REF", "XXXX-XX-XX", "1998-SU", "P1D", None, "1998-13"])
def test_vague_values_give_nothing(value):
    assert iso_interval(value) is None
    assert timex_relation(value, "1998") is None


def test_time_time_edges():
    d = Document(
        "d",
        timexes={"t1": ("Jan 1", "1998-01-01"), "t2": ("Jan 2", "1998-01-02"), "t3": ("now", "PRESENT_REF")},
    )
    assert len(to_interval_graph(d)) == 0
    g = to_interval_graph(d, include_time_time=True)
    assert list(g.edges()) == [("t1", "t2", RelationSet.parse("b"))]


def test_contradictory_links_are_flagged_and_omitted():
    d = Document("d", events={"a": "", "b": ""}, tlinks=[("a", "b", "BEFORE"), ("a", "b", "AFTER")])
    conv = convert(d)
    assert conv.conflicts == [("a", "b")]
    assert len(conv.graph) == 0


def test_duplicate_links_intersect():
    d = Document("d", events={"a": "", "b": ""}, tlinks=[("a", "b", "BEFORE"), ("b", "a", "AFTER")])
    assert to_interval_graph(d).relation("a", "b") == RelationSet.parse("b")


def test_components():
    chain = Document("c", events={x: "" for x in "abc"}, tlinks=[("a", "b", "BEFORE"), ("b", "c", "BEFORE")])
    assert components(to_interval_graph(chain)) == [3]
    pairs = Document(
        "p", events={x: "" for x in "abcd"}, tlinks=[("a", "b", "BEFORE"), ("c", "d", "BEFORE")]
    )
    stats = corpus_stats([pairs], ["raw"]).modes["raw"]
    assert stats.avg_components == 2 and stats.component_avg_size == 2


def test_corpus_stats_counts_inconsistent_documents():
    cyc = Document(
        "x", events={x: "" for x in "abc"},
        tlinks=[("a", "b", "BEFORE"), ("b", "c", "BEFORE"), ("c", "a", "BEFORE")],
    )
    ok = bundled_fixture()
    stats = corpus_stats([cyc, ok])
    assert stats.modes["raw"].consistent == 2
    assert stats.modes["saturated"].consistent == 1
    assert stats.modes["saturated"].avg_relations == 2
    table = stats.to_dict()
    assert table["Consistent annotations"]["saturated"] == 1
    with pytest.raises(ValueError):
        corpus_stats([ok], ["bogus"])


def test_saturation_preserves_components():
    d = bundled_fixture()
    raw = corpus_stats([d], ["raw", "saturated"]).modes
    assert raw["raw"].avg_components == raw["saturated"].avg_components


def test_read_corpus(tmp_path):
    (tmp_path / "sub").mkdir()
    (tmp_path / "sub" / "a.tml").write_bytes(serialize_timeml(bundled_fixture()))
    (tmp_path / "b.xml").write_bytes(b"<TimeML></TimeML>")
    docs = read_corpus(tmp_path)
    assert [d.id for d in docs] == ["b", "example1"]
