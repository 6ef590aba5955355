from hypothesis import strategies as st

from she_chb.core import AngleSet


@st.composite
def angle_sets(draw, k=2, min_gap=0.01, max_angle=89.0):
    """Strictly ascending angles with at least one below ``max_angle`` so V1 != 0."""
    raw = draw(st.lists(st.floats(0.0, 90.0, allow_nan=False), min_size=k, max_size=k))
    raw = sorted(raw)
    for i in range(1, k):
        if raw[i] - raw[i - 1] < min_gap:
            raw[i] = min(90.0, raw[i - 1] + min_gap)
    if len(set(raw)) != k or raw[0] > max_angle:
        raw = [max_angle * (i + 1) / (k + 1) for i in range(k)]
    return AngleSet(tuple(raw))
