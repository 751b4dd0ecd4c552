from itertools import combinations
from typing import Dict, Hashable, List, Tuple

import networkx as nx

from models.errors import StructureError

SWEEPS = 4

Order = List[List[Hashable]]


def count_crossings(order: Order, graph: nx.DiGraph) -> int:
    """Edge crossings between every pair of consecutive layers."""
    total = 0
    for upper, lower in zip(order, order[1:]):
        up_pos = {n: i for i, n in enumerate(upper)}
        low_pos = {n: i for i, n in enumerate(lower)}
        edges = [
            (up_pos[u], low_pos[v])
            for u in upper
            for v in graph.successors(u)
            if v in low_pos
        ]
        for (a, b), (c, d) in combinations(edges, 2):
            if (a - c) * (b - d) < 0:
                total += 1
    return total


class LayeredLayout:
    """
    Sugiyama-style layering of a DAG.

    - layers: longest path from the sources, so every node sits strictly
      below all of its predecessors
    - long edges are split with dummy nodes ("dummy", u, v, k)
    - ordering: SWEEPS rounds of down/up barycenter sweeps, keeping the
      ordering with the fewest crossings seen (the initial one included)
    """

    def __init__(self, graph: nx.DiGraph):
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            path = "->".join(str(u) for u, _ in cycle)
            raise StructureError(f"cannot layer a cyclic graph: {path}->{cycle[0][0]}")

        self.source = graph
        self.layers = self._assign_layers(graph)
        self.graph, self.chains = self._split_long_edges(graph)

        self.initial_order = self._initial_order()
        self.initial_crossings = count_crossings(self.initial_order, self.graph)
        self.order, self.crossings = self._minimize_crossings()

    @staticmethod
    def _assign_layers(graph: nx.DiGraph) -> Dict[Hashable, int]:
        layers: Dict[Hashable, int] = {}
        for node in nx.lexicographical_topological_sort(graph):
            pred_layers = [layers[p] for p in graph.predecessors(node)]
            layers[node] = max(pred_layers) + 1 if pred_layers else 0
        return layers

    def _split_long_edges(self, graph: nx.DiGraph):
        g = nx.DiGraph()
        g.add_nodes_from(sorted(graph.nodes))
        chains: Dict[Tuple[Hashable, Hashable], List[Hashable]] = {}
        for u, v in sorted(graph.edges):
            span = self.layers[v] - self.layers[u]
            prev = u
            chain = []
            for k in range(1, span):
                dummy = ("dummy", u, v, k)
                self.layers[dummy] = self.layers[u] + k
                g.add_edge(prev, dummy)
                chain.append(dummy)
                prev = dummy
            g.add_edge(prev, v)
            chains[(u, v)] = chain
        return g, chains

    def _initial_order(self) -> Order:
        depth = max(self.layers.values(), default=-1) + 1
        order: Order = [[] for _ in range(depth)]
        # real nodes by id, dummies after them in edge order
        for node in sorted(n for n in self.source.nodes):
            order[self.layers[node]].append(node)
        for (u, v), chain in sorted(self.chains.items()):
            for dummy in chain:
                order[self.layers[dummy]].append(dummy)
        return order

    def _sweep(self, order: Order, downward: bool) -> Order:
        order = [list(layer) for layer in order]
        indices = range(1, len(order)) if downward else range(len(order) - 2, -1, -1)
        for i in indices:
            fixed = order[i - 1] if downward else order[i + 1]
            fixed_pos = {n: k for k, n in enumerate(fixed)}
            layer = order[i]

            def barycenter(item):
                k, node = item
                nbrs = self.graph.predecessors(node) if downward else self.graph.successors(node)
                pos = [fixed_pos[n] for n in nbrs if n in fixed_pos]
                return (sum(pos) / len(pos) if pos else float(k), k)

            order[i] = [node for _, node in sorted(enumerate(layer), key=barycenter)]
        return order

    def _minimize_crossings(self) -> Tuple[Order, int]:
        best, best_crossings = self.initial_order, self.initial_crossings
        current = self.initial_order
        for _ in range(SWEEPS):
            current = self._sweep(current, downward=True)
            current = self._sweep(current, downward=False)
            crossings = count_crossings(current, self.graph)
            if crossings < best_crossings:
                best, best_crossings = current, crossings
        return best, best_crossings

    def slots(self) -> Dict[Hashable, Tuple[float, int]]:
        """node -> (slot, layer); layers centered on the widest one."""
        widest = max((len(layer) for layer in self.order), default=0)
        out = {}
        for depth, layer in enumerate(self.order):
            offset = (widest - len(layer)) / 2.0
            for k, node in enumerate(layer):
                out[node] = (offset + k, depth)
        return out
