import pytest

from ispcf.exact.dyadic import Dyadic
from ispcf.exact.interval import Interval
from ispcf.lang import (
    parse, parse_type, check_term, typecheck, to_source, term_eq, subst,
    to_config, untemplate, classify_type, type_to_str, ParseError,
    TypeCheckError, BASIC, OBSERVABLE, GENERAL,
    UNIT, INT, REAL, BOOL, SumT, ProdT, FunT, DistT,
    Var, Lam, App, RealLit, IntLit,
)


def chk(src):
    return check_term(parse(src))


def test_parse_examples():
    t = chk("do x <- sample; ret (pos (x - 0.5))")
    assert type_to_str(t.ty) == "Dist (unit + unit)"
    t2 = chk("fst (1.0, 2)")
    assert t2.ty == REAL
    with pytest.raises(ParseError):
        parse("ret ret")
    with pytest.raises(ParseError):
        parse("do x <- ; ret x")


def test_literal_precision():
    t = parse("0.5")
    assert t.value.lo == t.value.hi == Dyadic(1, -1)
    t2 = parse("0.3")
    assert t2.value.lo < t2.value.hi
    w = t2.value.width()
    assert w <= 2 ** -64
    t3 = parse("0.3", literal_prec=16)
    assert t3.value.width() == 2 ** -16


def test_typecheck_examples():
    assert chk("score 1.0").ty == DistT(UNIT)
    with pytest.raises(TypeCheckError):
        chk("score (ret 1.0)")
    t = chk("rec (fn f: real -> real => f)")
    assert t.ty == FunT(REAL, REAL)
    with pytest.raises(TypeCheckError):
        chk("rec (fn f: real => 1)")
    with pytest.raises(TypeCheckError):
        chk("nonexistent_name")
    with pytest.raises(TypeCheckError):
        chk("1 + 1.0")
    assert chk("1 + 1").ty == INT
    assert chk("1 = 2").ty == BOOL
    with pytest.raises(TypeCheckError):
        chk("1.0 = 2.0")


def test_annotation_reproduced_on_recheck():
    t = chk("do x <- sample; ret (pos (x - 0.5))")
    ty1 = t.ty
    t2 = check_term(t)
    assert t2 is t and t2.ty == ty1


def test_classify_type():
    assert classify_type(REAL) == BASIC
    assert classify_type(ProdT(INT, SumT(UNIT, UNIT))) == OBSERVABLE
    assert classify_type(FunT(INT, REAL)) == GENERAL
    assert classify_type(ProdT(INT, DistT(REAL))) == GENERAL
    assert classify_type(parse_type("unit")) == BASIC


def test_config_roundtrip_example():
    t = chk("fn y: real => 2.0 * y + 1.0")
    c = to_config(t)
    assert [v.lo for v in c.theta.values()] == [Dyadic(2), Dyadic(1)]
    assert sorted(c.theta) == [1, 2]
    assert term_eq(untemplate(c), t)
    # no real literals: empty environment
    c2 = to_config(chk("fn n: int => n + 1"))
    assert c2.theta == {}


def test_subst_examples():
    m = parse("fn x: real => x + y")
    out = subst(m, "y", parse("1.0"))
    assert term_eq(out, parse("fn x: real => x + 1.0"))
    # capture avoidance: (fn y => x)[x := y] renames the binder
    m2 = Lam("y", REAL, Var("x"))
    out2 = subst(m2, "x", Var("y"))
    assert isinstance(out2, Lam) and out2.var != "y"
    assert isinstance(out2.body, Var) and out2.body.name == "y"
    # identity when the variable is absent
    m3 = parse("fn x: real => x")
    assert subst(m3, "z", parse("1.0")) is m3


def test_type_printing():
    assert type_to_str(parse_type("dist (unit + unit)")) \
        == "Dist (unit + unit)"
    assert type_to_str(parse_type("real -> real -> real")) \
        == "real -> real -> real"
    assert type_to_str(parse_type("(real -> real) -> real")) \
        == "(real -> real) -> real"
    assert type_to_str(parse_type("real * (int + unit)")) \
        == "real * (int + unit)"
    assert parse_type("bool") == SumT(UNIT, UNIT)


CORPUS = [
    "do x <- sample; ret (pos (x - 0.5))",
    "fst (1.0, 2)",
    "fn y: real => 2.0 * y + 1.0",
    "let f = fn x: real => x + 1.0 in ret (f 2.0)",
    "if pos 1.0 then ret 1 else ret 2",
    "do (x, y) <- ret (1.0, 2.0); ret (x + y)",
    "observe (pos 1.0); ret ()",
    "score 0.5; ret ()",
    "rec (fn f: real -> real => f)",
    "case inl[int] 1.0 of inl x => ret x | inr n => ret 3.0",
    "(fn d: dist bool => do a <- d; ret a) (ret true)",
    "fn s: int -> real => (s 0, s 1)",
    "ret (- log 0.5)",
    "inr[real] 7",
    "do u <- sample; ret (mux u 3)",
    "fn x: real => if pos x then exp (- x) else 0.0",
    "- (2.0 * 3.0) / 4.0",
    "ret (1 - 2 + 3)",
    "(fn p: real * real => ret (pos (1.0 - fst p * fst p))) (0.1, 0.2)",
    "do x <- (score 2.0; ret 1.0); ret (x * x)",
]


@pytest.mark.parametrize("src", CORPUS)
def test_print_parse_roundtrip(src):
    t = chk(src)
    printed = to_source(t)
    t2 = check_term(parse(printed))
    assert term_eq(t, t2), printed
    assert t2.ty == t.ty


def test_registry_program_roundtrip():
    from ispcf.stdlib import list_programs
    for entry in list_programs():
        t = entry.load()
        t2 = check_term(parse(to_source(t)))
        assert term_eq(t, t2), entry.name
        assert t2.ty == t.ty


def test_config_roundtrip_over_full_corpus():
    from ispcf.stdlib import list_programs
    corpus = [entry.load() for entry in list_programs()]
    corpus += [chk(src) for src in CORPUS]
    corpus += [chk(s) for s in (
        "ret (0.25 * 8.0)",
        "score 1.5; ret 2.5",
        "fn a: real => fn b: real => a * b - 0.125",
    )]
    assert len(corpus) >= 50
    for t in corpus:
        c = to_config(t)
        assert term_eq(untemplate(c), t)
        n_literals = _count_real_literals(t)
        assert len(c.theta) == n_literals
        assert sorted(c.theta) == list(range(1, n_literals + 1))


def _count_real_literals(t):
    n = 1 if isinstance(t, RealLit) else 0
    return n + sum(_count_real_literals(c) for c in t.children())


def test_unbound_and_shadowing():
    # let-bound names shadow registry constants
    t = chk("let exp = fn x: real => x in ret (exp 2.0)")
    assert t.ty == DistT(REAL)
    with pytest.raises(TypeCheckError):
        chk("fn x: real => x y")


def test_lambda_annotation_required_when_unknown():
    with pytest.raises(TypeCheckError):
        chk("fn x => x")
