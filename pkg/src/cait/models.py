"""The smart-home case study: proximity-based and GPS-based light control,
the run-time property checks and the system-equality checks."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

from .congruence import canon
from .equivalence import EquivalenceVerdict, weak_bisimilar
from .errors import ConfigViolation
from .explore import DEFAULT_BUDGET, explore
from .frontend.parser import Parser
from .labels import Act, Sigma, Tau
from .meta import PropertyReport
from .reduction import Barb, barbs, engine, reduction_graph
from .syntax import Network, Node, check_well_formed
from .universe import ModelUniverse, atom, num

VARIANTS = ("proximity", "gps")


@dataclass(frozen=True)
class ScenarioConfig:
    variant: str = "proximity"
    theta: int = 20
    temps: tuple = (15, 20, 25)
    delta: int = 1
    c1_range: int | None = None     # None keeps the variant's default
    c2_range: int | None = None
    mode: str = "auto"
    temp: int | None = None         # None starts at theta
    boiler: str = "off"
    lights: tuple = ("off", "off")

    def ranges(self) -> tuple:
        default = (0, 0) if self.variant == "proximity" else (2, 1)
        c1 = default[0] if self.c1_range is None else self.c1_range
        c2 = default[1] if self.c2_range is None else self.c2_range
        return c1, c2

    def validate(self):
        if self.variant not in VARIANTS:
            raise ConfigViolation(f"unknown variant {self.variant!r}")
        temps = tuple(self.temps)
        if self.theta not in temps:
            raise ConfigViolation(f"threshold {self.theta} is not in the temperature domain {temps}")
        if not any(t < self.theta for t in temps) or not any(t > self.theta for t in temps):
            raise ConfigViolation("the temperature domain needs values below and above the threshold")
        start = self.theta if self.temp is None else self.temp
        if start not in temps:
            raise ConfigViolation(f"initial temperature {start} is not in the domain")
        if self.mode not in ("man", "auto"):
            raise ConfigViolation(f"mode must be man or auto, not {self.mode!r}")
        for v in (self.boiler,) + tuple(self.lights):
            if v not in ("on", "off"):
                raise ConfigViolation(f"actuator value must be on or off, not {v!r}")
        if len(self.lights) != 2:
            raise ConfigViolation("two light values are needed")
        if self.delta < 0 or any(r < 0 for r in self.ranges()):
            raise ConfigViolation("delta and the light channel ranges must be natural numbers")


_DECLS = """\
location loc1 loc2 loc3 loc4 out
{dists}
delta {delta}
channel b range inf domain {{man, auto}}
channel c1 range {c1} domain {{()}}
channel c2 range {c2} domain {{()}}
{gps_channel}sensor mode node domain {{man, auto}}
sensor temp location domain {{{temps}}}
actuator light1 domain {{on, off}}
actuator light2 domain {{on, off}}
actuator boiler domain {{on, off}}

proc BoilerCtrl = fix X.mode?(z).timeout(b!<z>.sigma.X, X)
proc LightCtrl = fix X.timeout(c1!<>.sigma.X, X) | fix X.timeout(c2!<>.sigma.X, X)
proc L1 = fix X.timeout(c1?().light1!on.sigma.X, light1!off.X)
proc L2 = fix X.timeout(c2?().light2!on.sigma.X, light2!off.X)
proc TempCtrl = temp?(t).[t < {theta}] boiler!on.sigma.X; boiler!off.sigma.X
proc Manual = fix Y.b?(y).[y = auto] X; sigma.Y
proc Auto = fix X.timeout(b?(x).[x = man] boiler!on.sigma.Manual; TempCtrl, TempCtrl)
{gps_procs}
net LightMng1 = n1[light1={light1} |> L1] stat @ loc1
net LightMng2 = n2[light2={light2} |> L2] stat @ loc4
net BoilerMng = nB[temp={temp}, boiler={boiler} |> Auto] stat @ loc2
"""

_GPS = """\
proc GpsLightCtrl = fix X.@(x).timeout(g!<x>.sigma.X, X)
proc CLM = fix X.timeout(g?(y).[y = loc1] timeout(c1!<>.sigma.X, X); [y = loc4] timeout(c2!<>.sigma.X, X); sigma.X, X)
net CLightMng = nLM[|> CLM] stat @ loc3
"""

_PHONE = {
    ("proximity", True): "nP[mode={mode} |> BoilerCtrl | LightCtrl] mob @ out",
    ("gps", True): "nP[mode={mode} |> BoilerCtrl | GpsLightCtrl] mob @ out",
    ("proximity", False): "nP[mode={mode} |> LightCtrl] mob @ out",
    ("gps", False): "nP[mode={mode} |> GpsLightCtrl] mob @ out",
}


def _dists() -> str:
    rows = []
    for i in range(1, 5):
        for j in range(i + 1, 5):
            rows.append(f"dist loc{i} loc{j} {j - i}")
        rows.append(f"dist out loc{i} {i}")
    return "\n".join(rows)


def smart_home_text(cfg: ScenarioConfig = ScenarioConfig(), boiler: bool = True) -> str:
    """Model-file text for the configured system (or its light subsystem)."""
    cfg.validate()
    c1, c2 = cfg.ranges()
    gps = cfg.variant == "gps"
    decls = _DECLS.format(
        dists=_dists(), delta=cfg.delta, c1=c1, c2=c2,
        gps_channel="channel g range inf domain locations\n" if gps else "",
        gps_procs=_GPS if gps else "",
        temps=", ".join(str(t) for t in cfg.temps), theta=cfg.theta,
        light1=cfg.lights[0], light2=cfg.lights[1],
        temp=cfg.theta if cfg.temp is None else cfg.temp, boiler=cfg.boiler)
    phone = _PHONE[cfg.variant, boiler].format(mode=cfg.mode)
    parts = [phone, "LightMng1", "LightMng2"]
    if boiler:
        parts.append("BoilerMng")
    if gps:
        parts.append("CLightMng")
    chans = "c1, c2, g" if gps else "c1, c2"
    body = " |\n  ".join(parts)
    return f"{decls}\nnetwork\n  new {chans}. (\n  {body}\n  )\n"


@lru_cache(maxsize=64)
def _load(cfg: ScenarioConfig, boiler: bool):
    p = Parser(smart_home_text(cfg, boiler))
    p.parse_declarations()
    u = p._ensure_universe()
    p.expect("network")
    net = canon(p.network())
    violations = check_well_formed(net, u)
    if violations:
        raise ConfigViolation("; ".join(str(v) for v in violations))
    return u, net


def smart_home(cfg: ScenarioConfig = ScenarioConfig()) -> tuple:
    """``(universe, network)`` for the configured smart home."""
    return _load(cfg, True)


def build_smart_home(cfg: ScenarioConfig = ScenarioConfig()) -> Network:
    return smart_home(cfg)[1]


def smart_home_universe(cfg: ScenarioConfig = ScenarioConfig()) -> ModelUniverse:
    return smart_home(cfg)[0]


def light_subsystem(cfg: ScenarioConfig = ScenarioConfig()) -> tuple:
    """The phone's light control with the light managers, boiler manager removed."""
    return _load(cfg, False)


# -- run-time properties ------------------------------------------------------------------

def _update_everywhere(net: Network, s: str, v) -> Network:
    """Set sensor ``s`` on every node that carries it, wherever it is."""
    nodes = tuple(Node(n.name, n.iface.set_sensor(s, v), n.process, n.mobility, n.location)
                  if n.iface.has_sensor(s) else n for n in net.nodes)
    return canon(Network(net.restricted, nodes))


def stable_derivatives(graph) -> list:
    """The initial state and every state entered by a time step."""
    idx = {graph.initial}
    idx.update(t for _, l, t in graph.edges if isinstance(l, Sigma))
    return [graph.states[i] for i in sorted(idx)]


def check_runtime_properties(cfg: ScenarioConfig = ScenarioConfig(),
                             budget: int = DEFAULT_BUDGET) -> PropertyReport:
    """The four run-time properties of the case study over all stable derivatives."""
    u, net = smart_home(cfg)
    eng = engine(u)
    g = reduction_graph(net, u, budget)
    derivs = stable_derivatives(g)
    report = PropertyReport("runtime", g.n_states)
    counts = {"manual-on": 0, "cold-on": 0, "warm-off": 0, "lights-exclusive": 0}
    on, off = atom("on"), atom("off")
    boiler_loc = next(n.location for n in net.nodes if n.iface.has_actuator("boiler"))

    def inst(m):
        return [(l, t) for l, t in eng.step(m) if isinstance(l, (Tau, Act))]

    def check_update(kind, s, v, want):
        for d in derivs:
            start = _update_everywhere(d, s, v)
            sub = explore(start, inst, budget)
            for m in sub.states:
                if not any(isinstance(l, Sigma) for l, _ in eng.step(m)):
                    continue
                if Barb("boiler", boiler_loc, want) not in barbs(m):
                    counts[kind] += 1
                    report.counterexamples.append(
                        (m, f"{kind}: after {s}:={v} a time step is possible without boiler={want}"))
                    return

    check_update("manual-on", "mode", atom("man"), on)
    for t in cfg.temps:
        if t < cfg.theta:
            check_update("cold-on", "temp", num(t), on)
        else:
            check_update("warm-off", "temp", num(t), off)
    l1 = Barb("light1", "loc1", on)
    l2 = Barb("light2", "loc4", on)
    for m in g.states:
        b = barbs(m)
        if l1 in b and Barb("light2", "loc4", off) not in b or \
                l2 in b and Barb("light1", "loc1", off) not in b:
            counts["lights-exclusive"] += 1
            report.counterexamples.append((m, "lights-exclusive: both lights are on"))
    report.details["by-property"] = counts
    report.details["stable-derivatives"] = len(derivs)
    return report


# -- system equality ------------------------------------------------------------------------

@dataclass
class SystemEquality:
    lights: EquivalenceVerdict
    full: EquivalenceVerdict | None = None
    notes: list = field(default_factory=list)

    @property
    def bisimilar(self) -> bool:
        return self.lights.bisimilar and (self.full is None or self.full.bisimilar)


def check_light_subsystems(cfg: ScenarioConfig = ScenarioConfig(),
                           budget: int = DEFAULT_BUDGET) -> EquivalenceVerdict:
    ul, nl = light_subsystem(replace(cfg, variant="proximity", c1_range=None, c2_range=None))
    ur, nr = light_subsystem(replace(cfg, variant="gps", c1_range=None, c2_range=None))
    return weak_bisimilar(nl, nr, ul, budget, u_right=ur)


def check_full_systems(cfg: ScenarioConfig = ScenarioConfig(),
                       budget: int = DEFAULT_BUDGET) -> EquivalenceVerdict:
    ul, nl = smart_home(replace(cfg, variant="proximity", c1_range=None, c2_range=None))
    ur, nr = smart_home(replace(cfg, variant="gps", c1_range=None, c2_range=None))
    return weak_bisimilar(nl, nr, ul, budget, u_right=ur)


def check_system_equality(cfg: ScenarioConfig = ScenarioConfig(), budget: int = DEFAULT_BUDGET,
                          full: bool = True) -> SystemEquality:
    """Proximity and GPS smart homes compared, light subsystems first.

    The claim is made for δ = 1 only; other values are run and reported
    without an expected outcome.
    """
    result = SystemEquality(check_light_subsystems(cfg, budget))
    if cfg.delta != 1:
        result.notes.append(f"delta = {cfg.delta}: exploratory run, no expected verdict")
    if full:
        result.full = check_full_systems(cfg, budget)
    return result
