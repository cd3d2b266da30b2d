from fractions import Fraction

import pytest

from hellytools import io
from hellytools.constructions import gen_discrete_tight, gen_minkowski_tight
from hellytools.engine import ContainsKColinear, DiameterAtLeast, NonemptyIntersection, VWidthAtLeast
from hellytools.norms import PolytopeNorm

F = Fraction


def test_family_round_trip(tmp_path):
    for fam in (gen_discrete_tight(2)[0], gen_minkowski_tight(PolytopeNorm.l1(2))[0]):
        path = tmp_path / "f.json"
        io.save_family(path, fam)
        back = io.load_family(path)
        assert back == fam
        assert io.dumps(io.family_to_json(back)) == path.read_text()


def test_rationals_are_strings():
    fam = gen_minkowski_tight(PolytopeNorm.linf(2))[0]
    js = io.family_to_json(fam)
    h = js["members"][0]["halfspaces"][0]
    assert all(isinstance(x, str) for x in h["a"]) and isinstance(h["b"], str)


def test_bad_files():
    with pytest.raises(io.FormatError):
        io.family_from_json({"dim": 2, "members": [{"id": "a", "type": "Q"}]})
    with pytest.raises(io.FormatError):
        io.family_from_json({"members": []})
    with pytest.raises(io.FormatError):
        io.family_from_json({"dim": 1, "members": [{"id": "a", "type": "V", "points": [[0.5]]}]})


def test_norm_round_trip(tmp_path):
    norm = PolytopeNorm(2, ((1, 2), (F(1, 3), -1)), "mine")
    path = tmp_path / "n.json"
    io.write_json(path, io.norm_to_json(norm))
    assert io.resolve_norm(str(path), 2) == norm
    assert io.resolve_norm("l2", 2) is None
    assert io.resolve_norm("linf", 3) == PolytopeNorm.linf(3)


def test_predicates():
    assert io.parse_predicate("nonempty", 2) == NonemptyIntersection()
    assert io.parse_predicate("colinear:3", 2) == ContainsKColinear(3)
    assert io.parse_predicate("diameter:linf:>2", 2) == DiameterAtLeast(PolytopeNorm.linf(2), 2, strict=True)
    assert io.parse_predicate("diameter:l2:1/2", 2) == DiameterAtLeast(None, F(1, 4), squared=True)
    assert io.parse_predicate("diameter-sq:l2:1/2", 2) == DiameterAtLeast(None, F(1, 2), squared=True)
    assert io.parse_predicate("vwidth:1,0:1", 2) == VWidthAtLeast((1, 0), 1)
    for bad in ("diam", "colinear", "vwidth:1:1", "colinear:x", "diameter:linf:0.5.5"):
        with pytest.raises(io.FormatError):
            io.parse_predicate(bad, 2)
