# The named-map table and the rank-certified diagram catalog.

import pytest

from weilgroid.catalog import broken_diagram, get_diagram, get_map, load_catalog, standard_maps
from weilgroid.errors import NotPerceivedLimit
from weilgroid.models import formal_space, matrix_group, pair_groupoid, zero
from weilgroid.ops import check_perceived_limit, solve_limit
from weilgroid.spaces import d_power, dimension, oplus_space, parse_space

MODELS = (formal_space(1), formal_space(2), pair_groupoid(1), matrix_group(2), matrix_group(3))

# image rank, stacked row count: certified by hand before the solver existed
EXPECTED_RANKS = {
    "sum": (3, 4),
    "kl": (2, 4),
    "diff": (5, 8),
    "triple": (6, 12),
    "diff1": (10, 16),
    "diff2": (10, 16),
    "diff3": (10, 16),
}


def test_standard_maps_table():
    maps = standard_maps()
    assert len(maps) == 43
    for name, f in maps.items():
        assert f.name == name
        # every entry went through full morphism validation on load
        assert len(f.components) == f.codomain.num_generators


def test_key_map_shapes():
    maps = standard_maps()
    assert maps["twist"].domain == d_power(2)
    assert maps["mult"].codomain == d_power(1)
    assert maps["delta"].codomain == oplus_space(d_power(2), d_power(1))
    assert maps["quadneg"].domain == d_power(2)
    assert maps["quadneg"].codomain == d_power(4)


def test_get_map_unknown_name():
    with pytest.raises(KeyError):
        get_map("no-such-map")


def test_catalog_loads_seven_diagrams():
    names = [d.name for d in load_catalog()]
    assert names == ["sum", "kl", "diff", "triple", "diff1", "diff2", "diff3"]


def test_every_diagram_carries_a_citation():
    for diagram in load_catalog():
        assert diagram.citation.strip()


def test_diagram_apexes():
    assert get_diagram("sum").apex == parse_space("D(2)")
    assert get_diagram("kl").apex == d_power(1)
    assert get_diagram("diff").apex == parse_space("D^3{13,23}")
    assert get_diagram("triple").apex == parse_space("D^4{13,14,23,24,34}")
    for name, text in (("diff1", "D^4{24,34}"), ("diff2", "D^4{14,34}"), ("diff3", "D^4{14,24}")):
        assert get_diagram(name).apex == parse_space(text)


@pytest.mark.parametrize("name", sorted(EXPECTED_RANKS))
@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.label)
def test_certificates_have_frozen_ranks(name, model):
    cert = check_perceived_limit(model, get_diagram(name))
    rank, rows = EXPECTED_RANKS[name]
    assert cert.is_perceived_limit
    assert cert.kernel_rank == 0
    assert cert.image_rank == rank
    assert cert.compat_rank == rank
    assert len(cert.stacked) == rows


def test_certificate_relates_ranks_to_the_apex():
    # image rank can never exceed the apex dimension
    for diagram in load_catalog():
        cert = check_perceived_limit(formal_space(1), diagram)
        assert cert.image_rank <= dimension(diagram.apex)


def test_broken_control_is_refused():
    model = formal_space(1)
    diagram = broken_diagram()
    cert = check_perceived_limit(model, diagram)
    assert not cert.is_perceived_limit
    assert cert.kernel_rank == 2
    values = [zero(model, (0,), leg.domain) for leg in diagram.legs]
    with pytest.raises(NotPerceivedLimit):
        solve_limit(model, diagram, values)
