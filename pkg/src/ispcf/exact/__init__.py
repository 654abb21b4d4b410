from .dyadic import Dyadic, ZERO, ONE, HALF, round_down, round_up
from .interval import (
    Interval, BOTTOM, abs_lower, iv_arith, iv_add, iv_sub, iv_mul, iv_div,
    iv_neg, iv_primitive, iv_pi, PRIMITIVE_NAMES,
)
from .bits import (
    BitStream, substream, shift, pair_index, unpair_index, num_prefix,
    stream_real, StreamReal, derive_seed,
)
from .oracle import (
    RealOracle, ExactReal, exact_real, ArithReal, PrimReal, PiReal,
    pos_decide, decide_sign, compare, Sign, BinExpansion, bin_prime,
    MuxReal, mux, DEFAULT_BUDGET,
)
