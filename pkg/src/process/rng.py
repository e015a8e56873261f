# src/process/rng.py
"""
Fluxos aleatórios por sítio, determinísticos em (seed, v)

Cada sítio v recebe uniformes u_j(seed, v) obtidas por mistura SplitMix64
vetorizada em uint64. Janelas de tamanhos diferentes concordam nos sítios
em comum, e a geração paralela não precisa de coordenação.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_STREAM = np.uint64(0x632BE59BD9B4E019)
_TRIAL = np.uint64(0xD1B54A32D192ED03)
_MASK64 = (1 << 64) - 1


def _mix64(z: np.ndarray) -> np.ndarray:
    """Finalizador SplitMix64 (aritmética módulo 2^64)"""
    z = (z ^ (z >> np.uint64(30))) * _MUL1
    z = (z ^ (z >> np.uint64(27))) * _MUL2
    return z ^ (z >> np.uint64(31))


def _seed_array(seed) -> np.ndarray:
    if np.ndim(seed) == 0:
        return np.array([int(seed) & _MASK64], dtype=np.uint64)
    seeds = np.asarray(seed)
    if seeds.dtype == np.uint64:
        return seeds.reshape(-1)
    return np.array([int(s) & _MASK64 for s in np.ravel(seeds)], dtype=np.uint64)


def site_keys(seed, sites: np.ndarray) -> np.ndarray:
    """
    Chave de 64 bits por (semente, sítio)

    Args:
        seed: semente (inteiro) ou array de T sementes
        sites: array (n, d) de coordenadas inteiras

    Returns:
        shape (n,) para semente escalar, (T, n) para array de sementes
    """
    sites = np.atleast_2d(np.asarray(sites, dtype=np.int64))
    seeds = _seed_array(seed)
    key = _mix64(seeds + _GOLDEN)[:, None]
    for j in range(sites.shape[1]):
        coord = np.ascontiguousarray(sites[:, j]).view(np.uint64)
        key = _mix64(key ^ (coord + _GOLDEN * np.uint64(j + 1))[None, :])
    return key[0] if np.ndim(seed) == 0 else key


def site_uniforms(seed, sites: np.ndarray, n_streams: int) -> np.ndarray:
    """
    Uniformes em (0, 1): shape (n, n_streams), ou (T, n, n_streams) para T sementes
    """
    keys = site_keys(seed, sites)
    out = np.empty(keys.shape + (n_streams,), dtype=np.float64)
    for j in range(n_streams):
        x = _mix64(keys + _GOLDEN * np.uint64(j + 1) + _STREAM)
        # 53 bits de mantissa, deslocados meio passo para excluir 0 e 1
        out[..., j] = ((x >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53
    return out


def trial_seeds(master_seed: int, trials, start: int = 0) -> np.ndarray:
    """
    Sementes de 64 bits das tentativas start .. start+trials−1

    Dependem só de (master_seed, índice), nunca do particionamento entre workers.
    """
    index = np.arange(start, start + int(trials), dtype=np.uint64)
    master = _mix64(np.array([int(master_seed) & _MASK64], dtype=np.uint64) + _TRIAL)
    return _mix64(master ^ (index * _GOLDEN + _TRIAL))


def trial_seed(master_seed: int, trial: int) -> int:
    """Semente da tentativa `trial`"""
    return int(trial_seeds(master_seed, 1, start=trial)[0])
