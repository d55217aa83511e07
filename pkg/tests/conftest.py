import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from addforms.abelian import FiniteAbelianGroup, GroupSubset


def subset_from_mask(group: FiniteAbelianGroup, mask: int) -> GroupSubset:
    return GroupSubset.from_indices(
        group, [i for i in range(group.order) if mask >> i & 1]
    )


def subset_from_tuples(group: FiniteAbelianGroup, tuples) -> GroupSubset:
    return GroupSubset.from_residues(group, list(tuples))
