import numpy as np
import pytest

from gtfa.groups import build_cyclic, build_dihedral, build_product


def builtin_corpus():
    """The standard small-group corpus used across the suite."""
    groups = [build_cyclic(N) for N in (2, 3, 4, 8, 16)]
    groups += [build_dihedral(3), build_dihedral(4)]
    groups += [build_product(build_cyclic(2), build_dihedral(3))]
    return groups


@pytest.fixture
def rng():
    return np.random.default_rng(0x5EED)


@pytest.fixture(params=builtin_corpus(), ids=lambda gd: gd[0].name)
def group_and_dual(request):
    return request.param


def max_block_diff(a, b):
    return max(np.abs(x - y).max() for x, y in zip(a.blocks, b.blocks))


def group_file_text(group, dual):
    """Serialize a group and dual to the Group Table Format (test oracle)."""
    lines = [f"group {group.order}", f"identity {group.identity}"]
    lines += [" ".join(str(v) for v in row) for row in group.cayley]
    lines.append(f"irreps {len(dual.irreps)}")
    for eta in dual.irreps:
        lines.append(f"dim {eta.dim}")
        for x in range(group.order):
            for r in range(eta.dim):
                lines.append(" ".join(
                    f"{eta.matrices[x, r, c].real:.17g} {eta.matrices[x, r, c].imag:.17g}"
                    for c in range(eta.dim)
                ))
    return "\n".join(lines) + "\n"
