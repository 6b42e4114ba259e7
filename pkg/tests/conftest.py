import random

from hypothesis import HealthCheck, settings, strategies as st

from titslab.setcomp import SetComposition, interval

settings.register_profile(
    "titslab",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("titslab")


@st.composite
def set_compositions(draw, support=None, min_size=1, max_size=5):
    """A random set composition of ``support`` (default [n] for a drawn n)."""
    if support is None:
        n = draw(st.integers(min_size, max_size))
        elems = list(range(1, n + 1))
    else:
        elems = sorted(support)
    order = draw(st.permutations(elems))
    cuts = draw(st.lists(st.booleans(), min_size=max(len(elems) - 1, 0), max_size=max(len(elems) - 1, 0)))
    blocks, cur = [], [order[0]] if order else []
    for x, cut in zip(order[1:], cuts):
        if cut:
            blocks.append(cur)
            cur = []
        cur.append(x)
    if cur:
        blocks.append(cur)
    return SetComposition.from_blocks(blocks)


@st.composite
def composition_pairs(draw, min_size=1, max_size=5):
    n = draw(st.integers(min_size, max_size))
    elems = range(1, n + 1)
    return draw(set_compositions(elems)), draw(set_compositions(elems))


def random_sc(rng: random.Random, n: int) -> SetComposition:
    elems = list(range(1, n + 1))
    rng.shuffle(elems)
    blocks, cur = [], [elems[0]]
    for x in elems[1:]:
        if rng.random() < 0.5:
            blocks.append(cur)
            cur = []
        cur.append(x)
    blocks.append(cur)
    return SetComposition.from_blocks(blocks)


__all__ = ["set_compositions", "composition_pairs", "random_sc", "interval"]
