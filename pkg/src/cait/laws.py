"""Concrete instances of the algebraic laws, each with counterparts that break
one side condition."""

from __future__ import annotations

from dataclasses import dataclass, field

from .equivalence import expands, weak_bisimilar
from .frontend.parser import parse_network, parse_universe
from .universe import ModelUniverse

LAW_UNIVERSE = """\
location l1 l2 l3
dist l1 l2 1
dist l2 l3 1
dist l1 l3 2
delta 1
channel lc range local domain {0, 1}
channel web range inf domain {0, 1}
channel sec range inf domain {0, 1}
channel near range 1 domain {0, 1}
channel short range 0 domain {0, 1}
channel g range inf domain locations
sensor s node domain {0, 1}
actuator a domain {0, 1}
actuator b domain {0, 1}
"""

# (law, relation, description, left, right, holds)
LAW_INSTANCES = [
    (1, "expansion", "redundant write of the current value",
     "n[a=1, b=0 |> a!1.b!1 | timeout(web!<0>, nil)] stat @ l1",
     "n[a=1, b=0 |> b!1 | timeout(web!<0>, nil)] stat @ l1", True),
    (1, "expansion", "written value differs from the current one",
     "n[a=0, b=0 |> a!1.b!1 | timeout(web!<0>, nil)] stat @ l1",
     "n[a=0, b=0 |> b!1 | timeout(web!<0>, nil)] stat @ l1", False),
    (1, "expansion", "the actuator also occurs in the rest of the node",
     "n[a=1 |> a!1 | a!0] stat @ l1",
     "n[a=1 |> a!0] stat @ l1", False),
    (2, "expansion", "position read replaced by the node's location",
     "n[|> @(x).timeout(g!<x>, nil) | timeout(web!<1>, nil)] stat @ l1",
     "n[|> timeout(g!<l1>, nil) | timeout(web!<1>, nil)] stat @ l1", True),
    (2, "expansion", "position read replaced by another location",
     "n[|> @(x).timeout(g!<x>, nil) | timeout(web!<1>, nil)] stat @ l1",
     "n[|> timeout(g!<l2>, nil) | timeout(web!<1>, nil)] stat @ l1", False),
    (3, "expansion", "intra-node communication on a local channel",
     "n[b=0 |> timeout(lc!<1>.b!1, nil) | timeout(lc?(x).timeout(web!<x>, nil), nil)"
     " | timeout(web?(y), nil)] stat @ l1",
     "n[b=0 |> b!1 | timeout(web!<1>, nil) | timeout(web?(y), nil)] stat @ l1", True),
    (3, "expansion", "another receiver on the same local channel",
     "n[a=0, b=0 |> timeout(lc!<1>.b!1, nil) | timeout(lc?(x).timeout(web!<x>, nil), nil)"
     " | timeout(lc?(y).a!1, nil)] stat @ l1",
     "n[a=0, b=0 |> b!1 | timeout(web!<1>, nil) | timeout(lc?(y).a!1, nil)] stat @ l1", False),
    (3, "expansion", "channel is not local",
     "n[b=0 |> timeout(web!<1>.b!1, nil) | timeout(web?(x).timeout(sec!<x>, nil), nil)] stat @ l1",
     "n[b=0 |> b!1 | timeout(sec!<1>, nil)] stat @ l1", False),
    (4, "expansion", "restricted Internet channel between two nodes",
     "new sec. (n[b=0 |> timeout(sec!<1>.b!1, nil)] stat @ l1 |"
     " m[|> timeout(sec?(x).timeout(web!<x>, nil), nil)] stat @ l3)",
     "n[b=0 |> b!1] stat @ l1 | m[|> timeout(web!<1>, nil)] stat @ l3", True),
    (4, "expansion", "short-range channel with the nodes out of range",
     "new near. (n[b=0 |> timeout(near!<1>.b!1, nil)] stat @ l1 |"
     " m[|> timeout(near?(x).timeout(web!<x>, nil), nil)] stat @ l3)",
     "n[b=0 |> b!1] stat @ l1 | m[|> timeout(web!<1>, nil)] stat @ l3", False),
    (5, "bisimilarity", "process without timeouts or actuator writes",
     "n[s=0, b=0 |> @(x).sigma.s?(y).sigma^2.nil] stat @ l1",
     "n[s=0, b=0 |> nil] stat @ l1", True),
    (5, "bisimilarity", "process with an actuator write",
     "n[s=0, b=0 |> sigma.b!1] stat @ l1",
     "n[s=0, b=0 |> nil] stat @ l1", False),
    (6, "bisimilarity", "idle node with no actuators",
     "n[s=1 |> nil] mob @ l2", "0", True),
    (6, "bisimilarity", "idle node with an actuator",
     "n[b=0 |> nil] stat @ l2", "0", False),
    (7, "bisimilarity", "mobile and stationary anonymous nodes",
     "n[|> fix X.timeout(web!<1>.sigma.X, X) | timeout(lc!<0>, nil) | timeout(lc?(z), nil)] mob @ l1",
     "m[|> fix X.timeout(web!<1>.sigma.X, X) | timeout(lc!<0>, nil) | timeout(lc?(z), nil)] stat @ l3",
     True),
    (7, "bisimilarity", "short-range channel",
     "n[|> fix X.timeout(short!<1>.sigma.X, X)] mob @ l1",
     "m[|> fix X.timeout(short!<1>.sigma.X, X)] stat @ l3", False),
    (7, "bisimilarity", "process reads its position",
     "n[|> fix X.@(x).timeout(g!<x>.sigma.X, X)] mob @ l1",
     "m[|> fix X.@(x).timeout(g!<x>.sigma.X, X)] stat @ l3", False),
]


@dataclass
class LawCheck:
    law: int
    relation: str
    description: str
    expected: bool      # whether the law's side conditions hold
    related: bool       # expansion or bisimilarity verdict
    bisimilar: bool

    @property
    def ok(self) -> bool:
        if self.expected:
            return self.related
        # a broken side condition must leave the two networks distinct
        return not self.bisimilar


@dataclass
class LawReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def for_law(self, law: int) -> list:
        return [c for c in self.checks if c.law == law]


def law_universe() -> ModelUniverse:
    return parse_universe(LAW_UNIVERSE)


def law_pairs(u: ModelUniverse | None = None):
    """Yield (law, relation, description, left, right, holds) with parsed networks."""
    u = u or law_universe()
    for law, rel, desc, left, right, holds in LAW_INSTANCES:
        yield law, rel, desc, parse_network(left, u), parse_network(right, u), holds


def check_algebraic_laws(u: ModelUniverse | None = None) -> LawReport:
    """Verify every law instance and every side-condition-violating counterpart."""
    u = u or law_universe()
    report = LawReport()
    for law, rel, desc, m, n, holds in law_pairs(u):
        bis = weak_bisimilar(m, n, u).bisimilar
        related = expands(m, n, u) if rel == "expansion" else bis
        report.checks.append(LawCheck(law, rel, desc, holds, related, bis))
    return report
