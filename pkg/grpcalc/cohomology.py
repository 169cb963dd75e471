"""First cohomology of G with coefficients in Q[G/H], by Fox Jacobian and by Shapiro's lemma."""
import logging
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

from .coset_enum import CosetTable, SubgroupPresentation, orbits, rewrite_subgroup
from .exact_linalg import IntegerMatrix, rank_rational, smith_normal_form
from .fox import jacobian
from .utils import InvariantViolation
from .words import Presentation

logger = logging.getLogger(__name__)


class ShapiroMismatch(InvariantViolation):
    pass


@dataclass(frozen=True)
class CohomologyReport:
    index: int
    dim_Z1: int
    dim_B1: int
    dim_H1: int
    dim_H1_shapiro: int
    abelianization_rank: int
    abelianization_torsion: Tuple[int, ...]

    def __post_init__(self):
        if self.dim_H1 != self.dim_Z1 - self.dim_B1:
            raise InvariantViolation('dim H1 must equal dim Z1 - dim B1')
        if self.dim_H1 != self.dim_H1_shapiro:
            raise ShapiroMismatch(f'Fox Jacobian gives dim H1 = {self.dim_H1} but the rewritten subgroup '
                                  f'has abelianization rank {self.dim_H1_shapiro} (index {self.index})')

    def to_dict(self) -> dict:
        result = asdict(self)
        result['abelianization_torsion'] = list(self.abelianization_torsion)
        return result


def cocycle_dim(p: Presentation, t: CosetTable, jacobian_rank: Optional[int] = None) -> int:
    """dim Z^1(G, Q[G/H]) = k*N - rank of the Fox Jacobian of the relators."""
    if jacobian_rank is None:
        jacobian_rank = rank_rational(jacobian(p, t))
    return p.k * t.size - jacobian_rank


def coboundary_dim(t: CosetTable) -> int:
    """dim B^1 = N - number of orbits, which is N - 1 for a coset table."""
    return t.size - len(orbits(t))


def relation_matrix(p: Presentation) -> IntegerMatrix:
    """|relators| x k exponent-sum matrix."""
    return IntegerMatrix.from_rows([r.exponent_sums(p.k) for r in p.relators], p.k)


def abelianization(p: Presentation) -> Tuple[int, Tuple[int, ...]]:
    """(free rank, torsion invariant factors) of G_ab."""
    form = smith_normal_form(relation_matrix(p))
    return p.k - form.rank, form.torsion


def abelianization_rank(p: Presentation) -> int:
    return p.k - rank_rational(relation_matrix(p))


def h1_routes(p: Presentation, t: CosetTable,
              subgroup: Optional[SubgroupPresentation] = None) -> Tuple[int, int]:
    """(dim Z1 - dim B1 from the Fox Jacobian, free rank of the rewritten subgroup's abelianization)."""
    if subgroup is None:
        subgroup = rewrite_subgroup(p, t)
    return cocycle_dim(p, t) - coboundary_dim(t), abelianization_rank(subgroup.presentation)


def h1_dim(p: Presentation, t: CosetTable, subgroup: Optional[SubgroupPresentation] = None) -> CohomologyReport:

    """Both routes to dim H^1(G, Q[G/H]); they must agree."""
    if subgroup is None:
        subgroup = rewrite_subgroup(p, t)
    z1 = cocycle_dim(p, t)
    b1 = coboundary_dim(t)
    rank, torsion = abelianization(subgroup.presentation)
    logger.debug(f'Index {t.size}: dim Z1 = {z1}, dim B1 = {b1}, rank H_ab = {rank}')
    return CohomologyReport(index=t.size, dim_Z1=z1, dim_B1=b1, dim_H1=z1 - b1, dim_H1_shapiro=rank,
                            abelianization_rank=rank, abelianization_torsion=torsion)
