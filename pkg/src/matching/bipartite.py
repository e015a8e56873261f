# src/matching/bipartite.py
"""
Emparelhamento máximo em grafos bipartidos (Hopcroft-Karp)

As listas de adjacência são percorridas na ordem dada, e um passe guloso
inicial segue a ordem dos vértices da esquerda: com adjacências ordenadas
por preferência, o emparelhamento resultante é determinístico.
"""

from collections import deque
from typing import List, Sequence, Tuple

NIL = -1


class BipartiteGraph:
    """
    Grafo G = ((U, V), E) com vértices indexados sequencialmente

    `adj_u[u]` preserva a ordem de inserção (a ordem de preferência).
    """

    def __init__(self, num_u: int, num_v: int, adjacency: Sequence[Sequence[int]]):
        if len(adjacency) != num_u:
            raise ValueError(f"adjacency has {len(adjacency)} rows, expected {num_u}")
        self.num_u = num_u
        self.num_v = num_v
        self.adj_u: List[List[int]] = []
        for row in adjacency:
            seen = set()
            ordered = []
            for v in row:
                if not 0 <= v < num_v:
                    raise ValueError(f"right vertex {v} out of range")
                if v not in seen:
                    seen.add(v)
                    ordered.append(v)
            self.adj_u.append(ordered)

    @classmethod
    def from_edges(cls, num_u: int, num_v: int, edges: Sequence[Tuple[int, int]]):
        adjacency = [[] for _ in range(num_u)]
        for u, v in edges:
            adjacency[u].append(v)
        return cls(num_u, num_v, adjacency)


class HopcroftKarp:
    """
    Emparelhamento de cardinalidade máxima

    BFS por camadas a partir dos vértices livres de U e DFS iterativa
    (sem recursão) para caminhos aumentantes disjuntos.
    """

    def __init__(self, graph: BipartiteGraph):
        self.graph = graph
        self.matched_u = [NIL] * graph.num_u
        self.matched_v = [NIL] * graph.num_v
        self.dist: List[float] = [0.0] * graph.num_u
        self.dist_nil = float('inf')

    def _greedy_start(self):
        for u in range(self.graph.num_u):
            for v in self.graph.adj_u[u]:
                if self.matched_v[v] == NIL:
                    self.matched_u[u] = v
                    self.matched_v[v] = u
                    break

    def _connect_unmatched_vertices(self) -> bool:
        """Camadas BFS; True se existe caminho aumentante"""
        inf = float('inf')
        queue = deque()
        for u in range(self.graph.num_u):
            if self.matched_u[u] == NIL:
                self.dist[u] = 0
                queue.append(u)
            else:
                self.dist[u] = inf
        self.dist_nil = inf
        while queue:
            u = queue.popleft()
            if self.dist[u] < self.dist_nil:
                for v in self.graph.adj_u[u]:
                    w = self.matched_v[v]
                    if w == NIL:
                        if self.dist_nil == inf:
                            self.dist_nil = self.dist[u] + 1
                    elif self.dist[w] == inf:
                        self.dist[w] = self.dist[u] + 1
                        queue.append(w)
        return self.dist_nil != inf

    def _add_augmenting_path(self, root: int, pointer: List[int]) -> bool:
        """DFS iterativa ao longo das camadas a partir de `root`"""
        inf = float('inf')
        stack = [root]
        via: List[int] = []
        while stack:
            u = stack[-1]
            adj = self.graph.adj_u[u]
            advanced = False
            while pointer[u] < len(adj):
                v = adj[pointer[u]]
                pointer[u] += 1
                w = self.matched_v[v]
                if w == NIL:
                    if self.dist_nil == self.dist[u] + 1:
                        via.append(v)
                        for x, y in zip(stack, via):
                            self.matched_u[x] = y
                            self.matched_v[y] = x
                        return True
                elif self.dist[w] == self.dist[u] + 1:
                    via.append(v)
                    stack.append(w)
                    advanced = True
                    break
            if not advanced:
                # não visitar o mesmo vértice de novo nesta fase
                self.dist[u] = inf
                stack.pop()
                if via:
                    via.pop()
        return False

    def __call__(self) -> List[Tuple[int, int]]:
        """Executa o algoritmo e devolve os pares (u, v) emparelhados"""
        self.matched_u = [NIL] * self.graph.num_u
        self.matched_v = [NIL] * self.graph.num_v
        self._greedy_start()
        while self._connect_unmatched_vertices():
            pointer = [0] * self.graph.num_u
            for u in range(self.graph.num_u):
                if self.matched_u[u] == NIL:
                    self._add_augmenting_path(u, pointer)
        return [(u, v) for u, v in enumerate(self.matched_u) if v != NIL]


def maximum_matching(num_u: int, num_v: int, adjacency: Sequence[Sequence[int]]) -> List[int]:
    """Atalho: parceiro de cada u (NIL se livre)"""
    solver = HopcroftKarp(BipartiteGraph(num_u, num_v, adjacency))
    solver()
    return list(solver.matched_u)
