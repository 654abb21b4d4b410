from .types import (
    Type, UNIT, VOID, INT, REAL, BOOL, SumT, ProdT, FunT, DistT,
    classify_type, is_observable, type_to_str, BASIC, OBSERVABLE, GENERAL,
)
from .ast import (
    Term, Var, ConstRef, RealLit, IntLit, UnitLit, TemplateVar, Lam, App,
    Rec, Ret, Do, Pair, Proj, Inj, Case, Sample, SampleFin, Score, BinOp,
    UMinus, subst, term_eq, fresh_name, Config, to_config, untemplate,
)
from .parser import parse, parse_type, ParseError, tokenize
from .printer import to_source
from .check import typecheck, check_term, TypeCheckError
from .constants import REGISTRY, ConstantSig, EvalCtx
from .values import (
    BOTTOM_VAL, UNDECIDED_VAL, UNIT_VAL, TRUE_VAL, FALSE_VAL, PairV, InjV,
)
