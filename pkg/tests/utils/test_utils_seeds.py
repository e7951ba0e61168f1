from dockvision.utils.seeds import derive_rng, derive_seed


def test_utils_seeds_derive_seed_is_stable():
    assert derive_seed(0, 1, 2) == derive_seed(0, 1, 2)


def test_utils_seeds_keys_give_independent_streams():
    seeds = {derive_seed(0), derive_seed(0, 0), derive_seed(0, 1), derive_seed(1, 0)}
    assert len(seeds) == 4


def test_utils_seeds_derive_rng_reproducible():
    a = derive_rng(7, 3).normal(size=5)
    b = derive_rng(7, 3).normal(size=5)
    assert (a == b).all()
