from fractions import Fraction

import pytest

from cliffchain.catalog import transform as named
from cliffchain.chain import LocalImage, SignRule, Transform
from cliffchain.hamiltonian import (
    Coupling,
    ModelError,
    NonLocalTerm,
    NotFree,
    Term,
    TIHamiltonian,
    free_fermion_term_map,
    frustration_graph,
    graphs_match,
    jordan_wigner_recognize,
    load,
    loads,
    model,
    order_parameter_image,
    symmetry_commutes,
    transform,
)
from cliffchain.pauli import parse, pauli


class TestCoupling:
    @pytest.mark.parametrize(
        "text, parts",
        [
            ("-Delta", (("Delta", Fraction(-1)),)),
            ("1/2*h", (("h", Fraction(1, 2)),)),
            ("-1/2*tm1 + 3e-2*h", (("h", Fraction(3, 100)), ("tm1", Fraction(-1, 2)))),
            ("2", (("", Fraction(2)),)),
        ],
    )
    def test_parse(self, text, parts):
        assert Coupling.parse(text).parts == parts

    def test_arithmetic(self):
        a = Coupling.parse("Delta + 1")
        assert (a + (-a)).is_zero
        assert (a * 2).evaluate({"Delta": 0.5}) == 3.0

    def test_bad(self):
        with pytest.raises(ModelError):
            Coupling.parse("2**h")

    def test_missing_parameter(self):
        with pytest.raises(ModelError):
            Coupling.parse("h").evaluate({})


class TestModel:
    def test_sign_folding(self):
        t = Term(Coupling.of(1), parse("-XZX@-1"))
        assert t.op == parse("+XZX@-1") and t.coupling == Coupling.of(-1)

    def test_anchor_free_equality(self):
        a = TIHamiltonian.from_pairs([(1, "+ZZ@0"), (2, "+X@0")])
        b = TIHamiltonian.from_pairs([(2, "+X@3"), (1, "+ZZ@-4")])
        assert a == b and not a.same_anchors(b)

    def test_translates_merge(self):
        h = TIHamiltonian.from_pairs([(1, "+ZZ@0"), (1, "+ZZ@5")])
        assert len(h.terms) == 1 and h.terms[0].coupling == Coupling.of(2)

    def test_cancelling_terms_drop(self):
        assert TIHamiltonian.from_pairs([(1, "+X@0"), (-1, "+X@2")]).terms == []

    def test_substitute(self):
        h = model("xxz").substitute(Delta=0.5)
        assert h.symbols == set()

    def test_unknown_model(self):
        with pytest.raises(KeyError):
            model("nope")


# (source model, transform, expected model)
SUITE = [
    ("xxz", "U1", "h1"),
    ("xxz", "U2", "h2"),
    ("xxz", "U3", "h3"),
    ("xxz", "U4", "h4"),
    ("xxz", "U4*U2", "h0"),
    ("xxz-h", "Ufield", "hp"),
    ("xxz-h", "KW", "hpp"),
]


class TestTransform:
    @pytest.mark.parametrize("src, by, want", SUITE)
    def test_suite(self, src, by, want):
        got = transform(model(src), named(by))
        assert got == model(want)

    def test_h0_with_three_couplings(self):
        got = transform(model("xyz"), named("U4*U2"))
        assert got == TIHamiltonian.from_pairs(
            [("-J1", "+ZYXYYXYZ@-3"), ("-J2", "+ZYYIIYYZ@-3"), ("-J3", "+ZYYZ@-1")]
        )

    def test_field_term_of_cluster_image(self):
        got = transform(model("xxz-h"), named("Ufield"))
        field = [t for t in got.terms if "h" in t.coupling.symbols]
        assert [str(t.op.translate(-t.op.lo)) for t in field] == ["+ZYZ@0"]

    def test_string_from_composite(self):
        H = model("hpp").substitute(h=0)
        assert transform(H, named("NL2*SX")) == model("hppp")

    @pytest.mark.parametrize("by", ["NL2", "NL3"])
    def test_non_local_raises(self, by):
        with pytest.raises(NonLocalTerm):
            transform(model("xxz"), named(by))

    def test_oscillating_sign_splits_sublattices(self):
        class Flip(Transform):
            name = "flip"

            def image(self, p, horizon=64):
                return Oscillating(p)

        class Oscillating(LocalImage):
            @property
            def sign_rule(self):
                return SignRule.from_samples([1, -1])

        got = transform(TIHamiltonian.from_pairs([(1, "+Z@0")]), Flip())
        assert sorted(t.sublattice for t in got.terms) == [(0, 2), (1, 2)]
        assert {t.coupling.evaluate({}) for t in got.terms} == {1.0, -1.0}


class TestFreeFermions:
    @pytest.mark.parametrize(
        "term, image",
        [
            ("+XZZX@0", "+ZYXZZXYZ@-2"),
            ("+XZX@0", "+ZYYXYYZ@-2"),
            ("+YZY@0", "-ZXZXZXZ@-2"),
            ("+YZZY@0", "+ZXIIIIXZ@-2"),
        ],
    )
    def test_u4_term_maps(self, term, image):
        assert free_fermion_term_map(term) == parse(image)

    def test_recognize(self):
        t = jordan_wigner_recognize(model("hfree"))
        assert t[0] == Coupling.parse("t0") and t[-2] == Coupling.parse("tm2")

    def test_ising(self):
        t = jordan_wigner_recognize(model("ising"))
        assert t == {0: Coupling.parse("h"), 1: Coupling.of(1)}

    def test_not_free(self):
        r = jordan_wigner_recognize(model("xxz"))
        assert isinstance(r, NotFree) and not r

    def test_frustration_graph_invariant(self):
        H = model("hfree")
        for by in ("U1", "U4", "U4*U2"):
            assert graphs_match(H, transform(H, named(by)), 0, 8)

    def test_graph_sizes(self):
        g = frustration_graph(model("xxz"), 0, 5)
        assert g.number_of_nodes() == 18


class TestOrderParameters:
    def test_y_order_parameter(self):
        assert order_parameter_image("+Y@0") == parse("+ZXIYIXZ@-3")

    def test_x_order_parameter(self):
        assert order_parameter_image("+X@0") == parse("+ZXZZZXZ@-3")

    def test_string_order_bulk(self):
        # image of Y_1 .. Y_10: a bulk of Y decorated at both ends
        T = named("U4*U2")
        img = parse("+YYYYYYYYYY@1")
        out = T.image(img).op
        assert out == parse("+ZYYIIXYYYYXIIYYZ@-2")
        assert out.letters[6:10] == "YYYY"

    def test_symmetries(self):
        assert symmetry_commutes(model("h0"), "X", 20)
        assert symmetry_commutes(model("xxz"), "Z", 8)
        assert not symmetry_commutes(model("hpp"), "X", 8)
        with pytest.raises(ModelError):
            symmetry_commutes(model("h0"), "X", 6)


class TestFiles:
    def test_json_round_trip(self):
        h = transform(model("xxz"), named("U2"))
        assert loads(h.dumps()) == h

    def test_toml(self):
        text = 'name = "ising"\n[[terms]]\nJ = "1/2*h"\nP = "+Z@0"\n[[terms]]\nJ = -0.5\nP = "+XX@0"\n'
        assert loads(text, "toml") == model("ising")

    def test_json_error_location(self):
        with pytest.raises(ModelError, match=r"model.json:2:"):
            loads('{"terms":\n [ {"J": 1 "P": "+Z@0"} ] }', source="model.json")

    def test_bad_term(self):
        with pytest.raises(ModelError, match="term 0"):
            loads('{"terms": [{"J": 1, "P": "Z"}]}')

    def test_load_path(self, tmp_path):
        p = tmp_path / "m.json"
        p.write_text(model("xxz").dumps())
        assert load(p) == model("xxz")
