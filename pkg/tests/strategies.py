"""Hypothesis strategy producing grammar-valid expression sources."""

from hypothesis import strategies as st

_numbers = st.one_of(
    st.integers(0, 1000).map(str),
    st.tuples(st.integers(0, 99), st.integers(0, 999)).map(lambda t: f"{t[0]}.{t[1]}"),
    st.tuples(st.integers(1, 9), st.integers(-20, 20)).map(lambda t: f"{t[0]}e{t[1]}"),
)
_atoms = st.one_of(_numbers, st.sampled_from(["x", "e", "pi", " x ", "x"]))


def _extend(children):
    binary = st.tuples(children, st.sampled_from(["+", "-", "*", "/", "^", " + ", " ^ "]),
                       children).map(lambda t: "".join(t))
    call = st.tuples(st.sampled_from(["exp", "ln", "sin", "cos", "abs", "sqrt", "sign"]),
                     children).map(lambda t: f"{t[0]}({t[1]})")
    return st.one_of(binary, call, children.map(lambda s: f"({s})"), children.map(lambda s: "-" + s))


sources = st.recursive(_atoms, _extend, max_leaves=12)
