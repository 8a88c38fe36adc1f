"""Group context: the cyclic group Z/p^r acting on the indecomposable V_n."""

from __future__ import annotations

from dataclasses import dataclass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class GroupContext:
    """G = Z/p^r with generator sigma acting on V_n (basis x_1..x_n).

    sigma(x_i) = x_i + x_{i-1}, x_0 = 0.  ``n`` defaults to p + 1.
    """

    p: int
    r: int = 2
    n: int | None = None

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p!r}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.n is None:
            object.__setattr__(self, "n", self.p + 1)
        if not 1 <= self.n <= self.p ** self.r:
            raise ValueError(
                f"need 1 <= n <= p^r = {self.p ** self.r}, got n={self.n}")

    @property
    def order(self) -> int:
        return self.p ** self.r

    def check_subgroup(self, sub: "SubgroupSpec") -> None:
        if not 0 <= sub.t <= self.r:
            raise ValueError(f"subgroup exponent t={sub.t} outside [0, {self.r}]")

    def subgroup_order(self, sub: "SubgroupSpec") -> int:
        self.check_subgroup(sub)
        return self.p ** (self.r - sub.t)


@dataclass(frozen=True)
class SubgroupSpec:
    """The subgroup <sigma^(p^t)>, of order p^(r-t)."""

    t: int

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("t must be non-negative")

    def generator_power(self, ctx: GroupContext) -> int:
        return ctx.p ** self.t


G = SubgroupSpec(0)
L = SubgroupSpec(1)


def trivial_subgroup(ctx: GroupContext) -> SubgroupSpec:
    return SubgroupSpec(ctx.r)
