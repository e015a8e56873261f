# src/process/laws.py
"""
Leis de perturbação ξ e suas funções distribucionais exatas

Famílias:
- GaussianLaw(sigma, d): coordenadas i.i.d. N(0, σ²)
- PolynomialRadialLaw(alpha, d): ξ = R·u, ℙ(R ≥ r) = r^{−α} em [1, ∞), u uniforme na esfera ℓ²
- PolynomialCoordinateLaw(alpha, d): coordenadas i.i.d. s·R (s sinal uniforme)
- PointMassLaw(offset): ξ ≡ offset

Todas as caudas usam a norma ℓ∞ e o mesmo parâmetro do amostrador.
Φ vem de scipy.special (ndtr / log_ndtr / ndtri, precisão de máquina).
"""

import math
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from typing import ClassVar, Tuple

import numpy as np
from scipy import integrate, optimize, special

from core.errors import DivergentMean, ValidationError

logger = logging.getLogger(__name__)

# Nós de Gauss-Legendre por sub-arco na integração angular (d = 2)
ANGULAR_NODES = 24
# Sítios por bloco nas avaliações vetorizadas
SITE_CHUNK = 4096


def _as_sites(sites, dimension: int) -> np.ndarray:
    arr = np.asarray(sites, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.shape[0] == dimension else arr.reshape(-1, 1)
    if arr.shape[1] != dimension:
        raise ValidationError(
            f"sites have dimension {arr.shape[1]}, law has dimension {dimension}",
            expected=dimension, got=int(arr.shape[1])
        )
    return arr


def _check_radius(r: float, strict: bool = False) -> float:
    r = float(r)
    if not math.isfinite(r) or r < 0 or (strict and r == 0):
        raise ValidationError(f"invalid radius r={r}", r=r)
    return r


class PerturbationLaw(ABC):
    """
    Interface comum das leis de perturbação

    Subclasses são dataclasses congeladas: imutáveis, hasheáveis e seguras
    para uso concorrente.
    """

    kind: ClassVar[str] = ""
    is_continuous: ClassVar[bool] = True

    @property
    @abstractmethod
    def d(self) -> int:
        ...

    @property
    @abstractmethod
    def n_streams(self) -> int:
        """Uniformes consumidas por sítio no amostrador"""

    @property
    def is_product(self) -> bool:
        return False

    @abstractmethod
    def spec(self) -> str:
        """Forma textual na gramática da CLI"""

    @abstractmethod
    def sample(self, uniforms: np.ndarray) -> np.ndarray:
        """
        Transforma uniformes (n, n_streams) em perturbações (n, d)
        """

    @abstractmethod
    def tail_probability(self, r):
        """p(r) = ℙ(‖ξ‖∞ ≥ r)"""

    @abstractmethod
    def hit_probability(self, sites, r: float) -> np.ndarray:
        """ℙ(v + ξ ∈ B_r) para cada linha de `sites`"""

    @abstractmethod
    def log_avoidance(self, sites, r: float) -> np.ndarray:
        """log ℙ(v + ξ ∉ B_r), estável quando a probabilidade é minúscula"""

    @abstractmethod
    def tail_integral(self, r: float) -> float:
        """∫_r^∞ p(t) dt"""

    @abstractmethod
    def expected_count(self, r: float) -> float:
        """𝔼|Π ∩ B_r| = Σ_v ℙ(v + ξ ∈ B_r)"""

    def box_avoidance_probability(self, v, r: float) -> float:
        """ℙ(v + ξ ∉ B_r) para um único sítio"""
        r = _check_radius(r, strict=True)
        site = _as_sites(np.asarray(v, dtype=np.float64).reshape(1, -1), self.d)
        hit = float(self.hit_probability(site, r)[0])
        if hit < 0.5:
            return 1.0 - hit
        return float(np.exp(self.log_avoidance(site, r)[0]))

    def box_probabilities(self, sites, r: float) -> Tuple[np.ndarray, np.ndarray]:
        """(ℙ(v + ξ ∈ B_r), log ℙ(v + ξ ∉ B_r)) numa só passada"""
        return self.hit_probability(sites, r), self.log_avoidance(sites, r)

    def log_tail_probability(self, r):
        """log p(r), finito enquanto p(r) > 0 em precisão dupla"""
        with np.errstate(divide='ignore'):
            return np.log(self.tail_probability(r))

    def truncated_mean(self, r: float) -> float:
        """
        E(r) = 𝔼[‖ξ‖∞ 𝟙{‖ξ‖∞ ≥ r}] = r·p(r) + ∫_r^∞ p(t) dt
        """
        r = _check_radius(r)
        return r * float(self.tail_probability(r)) + self.tail_integral(r)

    def __str__(self) -> str:
        return self.spec()


# ============================================
# LEIS PRODUTO (coordenadas independentes e simétricas)
# ============================================

class ProductLaw(PerturbationLaw):
    """
    Leis com coordenadas i.i.d. simétricas e contínuas

    Subclasses fornecem coordinate_upper(x) = ℙ(ξ_1 > x) para x ≥ 0.
    """

    @property
    def is_product(self) -> bool:
        return True

    @abstractmethod
    def coordinate_upper(self, x: np.ndarray) -> np.ndarray:
        ...

    def coordinate_log_upper(self, x: np.ndarray) -> np.ndarray:
        with np.errstate(divide='ignore'):
            return np.log(self.coordinate_upper(x))

    def _log_upper_signed(self, x: np.ndarray) -> np.ndarray:
        """log ℙ(ξ_1 > x) para x de qualquer sinal"""
        x = np.asarray(x, dtype=np.float64)
        ax = np.abs(x)
        return np.where(x >= 0, self.coordinate_log_upper(ax),
                        np.log1p(-self.coordinate_upper(ax)))

    def interval_mass(self, lo, hi) -> np.ndarray:
        """
        ℙ(ξ_1 ∈ [lo, hi]) sem cancelamento catastrófico

        Usa a diferença de caudas do lado em que o intervalo está.
        """
        lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=np.float64),
                                     np.asarray(hi, dtype=np.float64))
        u_lo = self.coordinate_upper(np.abs(lo))
        u_hi = self.coordinate_upper(np.abs(hi))
        mass = np.where(
            lo >= 0, u_lo - u_hi,
            np.where(hi <= 0, u_hi - u_lo, 1.0 - u_lo - u_hi)
        )
        return np.clip(mass, 0.0, 1.0)

    def log_interval_miss(self, lo, hi) -> np.ndarray:
        """log ℙ(ξ_1 ∉ [lo, hi]) = log(ℙ(ξ_1 < lo) + ℙ(ξ_1 > hi))"""
        return np.logaddexp(self._log_upper_signed(-np.asarray(lo, dtype=np.float64)),
                            self._log_upper_signed(hi))

    def coordinate_tail(self, r) -> np.ndarray:
        """ℙ(|ξ_1| ≥ r)"""
        return np.minimum(1.0, 2.0 * self.coordinate_upper(np.asarray(r, dtype=np.float64)))

    def tail_probability(self, r):
        r_arr = np.asarray(r, dtype=np.float64)
        if np.any(r_arr < 0):
            raise ValidationError("tail radius must be nonnegative")
        q = self.coordinate_tail(r_arr)
        with np.errstate(divide='ignore'):
            p = -np.expm1(self.d * np.log1p(-q))
        return float(p) if np.ndim(r) == 0 else p

    def log_tail_probability(self, r):
        """log(1 − (1 − q)^d) com log q = log 2 + log ℙ(ξ_1 > r)"""
        r_arr = np.asarray(r, dtype=np.float64)
        log_q = np.minimum(0.0, math.log(2.0) + self.coordinate_log_upper(r_arr))
        q = np.exp(log_q)
        with np.errstate(divide='ignore', invalid='ignore'):
            direct = np.log(-np.expm1(self.d * np.log1p(-q)))
            # 1 − (1 − q)^d = d·q·(1 − (d−1)q/2 + …) para q pequeno
            series = math.log(self.d) + log_q + np.log1p(-(self.d - 1) * q / 2.0)
        out = np.where(q < 1e-8, series, direct)
        return float(out) if np.ndim(r) == 0 else out

    def hit_probability(self, sites, r: float) -> np.ndarray:
        v = _as_sites(sites, self.d)
        return np.prod(self.interval_mass(-r - v, r - v), axis=1)

    def log_avoidance(self, sites, r: float) -> np.ndarray:
        v = _as_sites(sites, self.d)
        log_miss = self.log_interval_miss(-r - v, r - v)
        total = np.sum(np.log1p(-np.exp(log_miss)), axis=1)
        with np.errstate(divide='ignore'):
            direct = np.log(-np.expm1(total))
        # todas as falhas por coordenada abaixo do menor double
        return np.where(total < 0, direct, special.logsumexp(log_miss, axis=1))

    def coordinate_count(self, r: float) -> float:
        """Σ_{k∈ℤ} ℙ(k + ξ_1 ∈ [−r, r])"""
        if self.is_continuous and float(2 * r).is_integer():
            return 2.0 * r
        k_max = int(math.ceil(r + self.coordinate_cutoff()))
        k = np.arange(-k_max, k_max + 1, dtype=np.float64)
        total = float(np.sum(self.interval_mass(-r - k, r - k)))
        edge = k_max + 0.5
        tail, _ = integrate.quad(
            lambda x: float(self.interval_mass(-r - x, r - x)),
            edge, np.inf, epsabs=1e-14, limit=200
        )
        return total + 2.0 * tail

    def coordinate_cutoff(self) -> float:
        """Distância além da qual a massa por coordenada é desprezível na soma explícita"""
        return 4096.0

    def expected_count(self, r: float) -> float:
        r = _check_radius(r, strict=True)
        return self.coordinate_count(r) ** self.d


@dataclass(frozen=True)
class GaussianLaw(ProductLaw):
    """Coordenadas i.i.d. N(0, σ²)"""

    sigma: float = 1.0
    dimension: int = 1

    kind: ClassVar[str] = "gaussian"

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValidationError(f"sigma must be positive, got {self.sigma}", sigma=self.sigma)
        if int(self.dimension) < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.dimension}")

    @property
    def d(self) -> int:
        return int(self.dimension)

    @property
    def n_streams(self) -> int:
        return self.d

    def spec(self) -> str:
        return f"gaussian:sigma={self.sigma!r}"

    def sample(self, uniforms: np.ndarray) -> np.ndarray:
        return self.sigma * special.ndtri(uniforms[:, :self.d])

    def coordinate_upper(self, x):
        return special.ndtr(-np.asarray(x, dtype=np.float64) / self.sigma)

    def coordinate_log_upper(self, x):
        return special.log_ndtr(-np.asarray(x, dtype=np.float64) / self.sigma)

    def coordinate_cutoff(self) -> float:
        return 40.0 * self.sigma

    def tail_integral(self, r: float) -> float:
        r = _check_radius(r)
        # além de r + 50σ a cauda é desprezível em relação a p(r)
        value, _ = integrate.quad(lambda t: self.tail_probability(t), r, r + 50.0 * self.sigma,
                                  epsabs=0.0, epsrel=1e-12, limit=400)
        return float(value)


@dataclass(frozen=True)
class PolynomialCoordinateLaw(ProductLaw):
    """Coordenadas i.i.d. s·R com ℙ(R ≥ r) = r^{−α} para r ≥ 1"""

    alpha: float = 1.0
    dimension: int = 1

    kind: ClassVar[str] = "poly-coord"

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValidationError(f"alpha must be positive, got {self.alpha}", alpha=self.alpha)
        if int(self.dimension) < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.dimension}")

    @property
    def d(self) -> int:
        return int(self.dimension)

    @property
    def n_streams(self) -> int:
        return 2 * self.d

    def spec(self) -> str:
        return f"poly-coord:alpha={self.alpha!r}"

    def sample(self, uniforms: np.ndarray) -> np.ndarray:
        signs = np.where(uniforms[:, 0::2][:, :self.d] < 0.5, -1.0, 1.0)
        radii = uniforms[:, 1::2][:, :self.d] ** (-1.0 / self.alpha)
        return signs * radii

    def coordinate_upper(self, x):
        x = np.asarray(x, dtype=np.float64)
        return 0.5 * np.maximum(x, 1.0) ** (-self.alpha)

    def tail_integral(self, r: float) -> float:
        r = _check_radius(r)
        if self.alpha <= 1:
            raise DivergentMean(f"tail integral diverges for alpha={self.alpha} <= 1",
                                alpha=self.alpha)
        x = max(r, 1.0)
        # 1 − (1 − t^{−α})^d expandido pelo binômio
        total = 0.0
        for k in range(1, self.d + 1):
            total += (-1) ** (k + 1) * math.comb(self.d, k) * x ** (1 - k * self.alpha) / (k * self.alpha - 1)
        return max(0.0, 1.0 - r) + total


# ============================================
# LEI RADIAL POLINOMIAL
# ============================================

def _sphere_area(d: int) -> float:
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def _sphere_linf_expectation(func, d: int, breakpoint: float = None) -> float:
    """
    𝔼[f(‖u‖∞)] para u uniforme em S^{d−1}

    Projeção gnômica sobre as 2d faces do cubo:
    𝔼 f = (2d/|S^{d−1}|) ∫_{[−1,1]^{d−1}} f((1+|x|²)^{−½}) (1+|x|²)^{−d/2} dx,
    reduzido por simetria a [0,1]^{d−1}.
    """
    const = 2 * d * 2 ** (d - 1) / _sphere_area(d)

    def integrand(*x):
        s = 1.0 + sum(xi * xi for xi in x)
        return func(s ** -0.5) * s ** (-d / 2.0)

    if d == 2:
        points = [breakpoint] if breakpoint is not None and 0 < breakpoint < 1 else None
        value, _ = integrate.quad(integrand, 0.0, 1.0, points=points,
                                  epsabs=1e-14, epsrel=1e-13, limit=200)
    elif d == 3:
        value, _ = integrate.dblquad(lambda y, x: integrand(x, y), 0.0, 1.0, 0.0, 1.0,
                                     epsabs=1e-13, epsrel=1e-12)
    else:
        value, _ = integrate.nquad(integrand, [[0.0, 1.0]] * (d - 1),
                                   opts={'epsabs': 1e-12, 'epsrel': 1e-11})
    return const * value


@lru_cache(maxsize=64)
def sphere_linf_moment(alpha: float, d: int) -> float:
    """𝔼‖u‖∞^α para u uniforme na esfera unitária ℓ² de ℝ^d"""
    if d == 1:
        return 1.0
    return _sphere_linf_expectation(lambda m: m ** alpha, d)


def _slab(direction, lo, hi):
    """Intervalo de parâmetro t ≥ 0 do raio t·u dentro da faixa lo ≤ x ≤ hi"""
    with np.errstate(divide='ignore', invalid='ignore'):
        t1 = lo / direction
        t2 = hi / direction
    parallel = direction == 0
    inside = (lo <= 0) & (hi >= 0)
    t_in = np.where(parallel, np.where(inside, -np.inf, np.inf), np.minimum(t1, t2))
    t_out = np.where(parallel, np.where(inside, np.inf, -np.inf), np.maximum(t1, t2))
    return t_in, t_out


def _planar_breakpoints(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Ângulos onde o integrando angular muda de forma (shape (n, 14), ordenados)

    Cantos do quadrado [a, b] e cruzamentos do círculo unitário com suas arestas.
    """
    n = a.shape[0]
    angles = [np.zeros(n), np.full(n, 2 * math.pi)]
    for cx in (a[:, 0], b[:, 0]):
        for cy in (a[:, 1], b[:, 1]):
            angles.append(np.arctan2(cy, cx))
    for axis in (0, 1):
        other = 1 - axis
        for c in (a[:, axis], b[:, axis]):
            with np.errstate(invalid='ignore'):
                h = np.sqrt(1.0 - c * c)
            for sign in (-1.0, 1.0):
                y = sign * h
                ok = (np.abs(c) <= 1.0) & (y >= a[:, other]) & (y <= b[:, other])
                pt = (c, y) if axis == 0 else (y, c)
                angles.append(np.where(ok, np.arctan2(pt[1], pt[0]), np.nan))
    bp = np.stack(angles, axis=1)
    bp = np.mod(bp, 2 * math.pi)
    bp[:, 1] = 2 * math.pi
    bp = np.where(np.isnan(bp), 2 * math.pi, bp)
    bp.sort(axis=1)
    return bp


def planar_radial_probabilities(alpha: float, sites: np.ndarray, r: float,
                                nodes: int = ANGULAR_NODES) -> Tuple[np.ndarray, np.ndarray]:
    """
    (ℙ(v+ξ ∈ B_r), ℙ(v+ξ ∉ B_r)) para a lei radial em d = 2

    Integra em θ a probabilidade de R cair no trecho [s0(θ), s1(θ)] do raio
    dentro do quadrado, com Gauss-Legendre entre pontos de quebra exatos.
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    hits = np.empty(sites.shape[0])
    misses = np.empty(sites.shape[0])

    for start in range(0, sites.shape[0], SITE_CHUNK):
        v = sites[start:start + SITE_CHUNK]
        a = -r - v
        b = r - v
        bp = _planar_breakpoints(a, b)
        half = 0.5 * (bp[:, 1:] - bp[:, :-1])
        mid = 0.5 * (bp[:, 1:] + bp[:, :-1])
        theta = mid[..., None] + half[..., None] * x
        cx, cy = np.cos(theta), np.sin(theta)

        ax, bx = a[:, 0, None, None], b[:, 0, None, None]
        ay, by = a[:, 1, None, None], b[:, 1, None, None]
        in_x, out_x = _slab(cx, ax, bx)
        in_y, out_y = _slab(cy, ay, by)
        s0 = np.maximum(0.0, np.maximum(in_x, in_y))
        s1 = np.minimum(out_x, out_y)
        crossed = s1 > s0

        s0c = np.maximum(s0, 1.0)
        s1c = np.maximum(np.where(crossed, s1, 1.0), 1.0)
        surv0 = s0c ** (-alpha)
        surv1 = s1c ** (-alpha)
        hit_f = np.where(crossed, surv0 - surv1, 0.0)
        miss_f = np.where(crossed, -np.expm1(-alpha * np.log(s0c)) + surv1, 1.0)

        weights = half[..., None] * w
        hits[start:start + v.shape[0]] = np.sum(hit_f * weights, axis=(1, 2)) / (2 * math.pi)
        misses[start:start + v.shape[0]] = np.sum(miss_f * weights, axis=(1, 2)) / (2 * math.pi)

    return np.clip(hits, 0.0, 1.0), np.clip(misses, 0.0, 1.0)


def _gnomonic_radial_hit(alpha: float, v: np.ndarray, r: float) -> float:
    """ℙ(v+ξ ∈ B_r) para a lei radial em d ≥ 3 (nquad sobre as faces do cubo)"""
    d = v.shape[0]
    a = -r - v
    b = r - v
    total = 0.0
    for axis in range(d):
        for sign in (-1.0, 1.0):
            def integrand(*x, axis=axis, sign=sign):
                u = np.insert(np.asarray(x), axis, sign)
                norm = math.sqrt(float(u @ u))
                u = u / norm
                t_in, t_out = _slab(u, a, b)
                s0 = max(0.0, float(np.max(t_in)))
                s1 = float(np.min(t_out))
                if s1 <= s0:
                    return 0.0
                g = max(s0, 1.0) ** (-alpha) - max(s1, 1.0) ** (-alpha)
                return g * norm ** (-d)
            value, _ = integrate.nquad(integrand, [[-1.0, 1.0]] * (d - 1),
                                       opts={'epsabs': 1e-11, 'epsrel': 1e-10, 'limit': 100})
            total += value
    return total / _sphere_area(d)


@dataclass(frozen=True)
class PolynomialRadialLaw(PerturbationLaw):
    """ξ = R·u com ℙ(R ≥ r) = r^{−α} para r ≥ 1 e u uniforme na esfera ℓ²"""

    alpha: float = 1.0
    dimension: int = 1

    kind: ClassVar[str] = "poly-radial"

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValidationError(f"alpha must be positive, got {self.alpha}", alpha=self.alpha)
        if int(self.dimension) < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.dimension}")

    @property
    def d(self) -> int:
        return int(self.dimension)

    @property
    def n_streams(self) -> int:
        return 1 + self.d

    @property
    def is_product(self) -> bool:
        # em d = 1, ±R coincide com a lei por coordenada
        return self.d == 1

    def _coordinate_twin(self) -> PolynomialCoordinateLaw:
        return PolynomialCoordinateLaw(alpha=self.alpha, dimension=1)

    def spec(self) -> str:
        return f"poly-radial:alpha={self.alpha!r}"

    def sample(self, uniforms: np.ndarray) -> np.ndarray:
        radii = uniforms[:, 0] ** (-1.0 / self.alpha)
        g = special.ndtri(uniforms[:, 1:1 + self.d])
        if self.d == 1:
            return radii[:, None] * np.sign(g)
        direction = g / np.linalg.norm(g, axis=1, keepdims=True)
        return radii[:, None] * direction

    def tail_probability(self, r):
        if np.ndim(r) > 0:
            return np.array([self.tail_probability(float(x)) for x in np.ravel(r)]).reshape(np.shape(r))
        r = _check_radius(r)
        if self.d == 1:
            return float(min(1.0, r ** (-self.alpha))) if r > 0 else 1.0
        if r >= 1.0:
            return r ** (-self.alpha) * sphere_linf_moment(self.alpha, self.d)
        if r <= self.d ** -0.5:
            return 1.0
        # ℙ(R‖u‖∞ ≥ r) = 𝔼[min(1, (‖u‖∞/r)^α)]
        value = _sphere_linf_expectation(
            lambda m: min(1.0, (m / r) ** self.alpha), self.d,
            breakpoint=math.sqrt(max(1.0 / (r * r) - 1.0, 0.0))
        )
        return float(min(1.0, value))

    def hit_probability(self, sites, r: float) -> np.ndarray:
        v = _as_sites(sites, self.d)
        if self.d == 1:
            return self._coordinate_twin().hit_probability(v, r)
        if self.d == 2:
            return planar_radial_probabilities(self.alpha, v, r)[0]
        return np.array([_gnomonic_radial_hit(self.alpha, row, r) for row in v])

    def log_avoidance(self, sites, r: float) -> np.ndarray:
        v = _as_sites(sites, self.d)
        if self.d == 1:
            return self._coordinate_twin().log_avoidance(v, r)
        if self.d == 2:
            miss = planar_radial_probabilities(self.alpha, v, r)[1]
        else:
            miss = 1.0 - self.hit_probability(v, r)
        with np.errstate(divide='ignore'):
            return np.log(miss)

    def box_probabilities(self, sites, r: float) -> Tuple[np.ndarray, np.ndarray]:
        if self.d != 2:
            return super().box_probabilities(sites, r)
        hits, misses = planar_radial_probabilities(self.alpha, _as_sites(sites, 2), r)
        with np.errstate(divide='ignore'):
            return hits, np.log(misses)

    def tail_integral(self, r: float) -> float:
        r = _check_radius(r)
        if self.alpha <= 1:
            raise DivergentMean(f"tail integral diverges for alpha={self.alpha} <= 1",
                                alpha=self.alpha)
        x = max(r, 1.0)
        beyond = sphere_linf_moment(self.alpha, self.d) * x ** (1 - self.alpha) / (self.alpha - 1)
        if r >= 1.0:
            return beyond
        below, _ = integrate.quad(lambda t: self.tail_probability(t), r, 1.0,
                                  epsabs=1e-13, limit=200)
        return below + beyond

    def expected_count(self, r: float) -> float:
        r = _check_radius(r, strict=True)
        if self.d == 1:
            return self._coordinate_twin().expected_count(r)
        if float(2 * r).is_integer():
            return (2.0 * r) ** self.d
        raise ValidationError(
            "radial laws in d >= 2 need 2r integer for the exact far-field sum",
            r=r, d=self.d
        )


# ============================================
# MASSA PONTUAL
# ============================================

@dataclass(frozen=True)
class PointMassLaw(PerturbationLaw):
    """ξ ≡ offset (perturbação determinística)"""

    offset: Tuple[float, ...] = (0.0,)

    kind: ClassVar[str] = "pointmass"
    is_continuous: ClassVar[bool] = False

    def __post_init__(self):
        object.__setattr__(self, 'offset', tuple(float(c) for c in self.offset))
        if len(self.offset) < 1 or not all(math.isfinite(c) for c in self.offset):
            raise ValidationError(f"invalid point-mass offset {self.offset}")

    @property
    def d(self) -> int:
        return len(self.offset)

    @property
    def n_streams(self) -> int:
        return 0

    @property
    def norm(self) -> float:
        return max(abs(c) for c in self.offset)

    def spec(self) -> str:
        return "pointmass:" + ",".join(repr(c) for c in self.offset)

    def sample(self, uniforms: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.offset), (uniforms.shape[0], self.d)).copy()

    def tail_probability(self, r):
        r_arr = np.asarray(r, dtype=np.float64)
        p = np.where(self.norm >= r_arr, 1.0, 0.0)
        return float(p) if np.ndim(r) == 0 else p

    def hit_probability(self, sites, r: float) -> np.ndarray:
        v = _as_sites(sites, self.d)
        inside = np.all(np.abs(v + np.asarray(self.offset)) <= r, axis=1)
        return inside.astype(np.float64)

    def log_avoidance(self, sites, r: float) -> np.ndarray:
        with np.errstate(divide='ignore'):
            return np.log(1.0 - self.hit_probability(sites, r))

    def tail_integral(self, r: float) -> float:
        return max(0.0, self.norm - _check_radius(r))

    def truncated_mean(self, r: float) -> float:
        r = _check_radius(r)
        return self.norm if self.norm >= r else 0.0

    def expected_count(self, r: float) -> float:
        r = _check_radius(r, strict=True)
        count = 1.0
        for c in self.offset:
            # inteiros k com |k + c| ≤ r
            count *= max(0, math.floor(r - c) - math.ceil(-r - c) + 1)
        return count


# ============================================
# FUNÇÕES AUXILIARES
# ============================================

def expected_max_perturbation(law: PerturbationLaw, n_sites: int) -> float:
    """
    Quantil típico do máximo de n_sites perturbações: q com n·p(q) = 1
    """
    if isinstance(law, PointMassLaw):
        return law.norm
    target = 1.0 / max(int(n_sites), 1)
    if law.tail_probability(1.0) < target:
        hi = 1.0
        return float(optimize.brentq(lambda q: law.tail_probability(q) - target, 0.0, hi,
                                     xtol=1e-6))
    hi = 2.0
    while law.tail_probability(hi) >= target:
        hi *= 2.0
        if hi > 1e15:
            return math.inf
    return float(optimize.brentq(lambda q: law.tail_probability(q) - target, hi / 2.0, hi,
                                 xtol=1e-6))
