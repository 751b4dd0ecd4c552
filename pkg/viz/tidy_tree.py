from typing import Dict, List, Tuple

# one unit = node width + horizontal gap, siblings and cousins alike
SEPARATION = 1.0


class TidyNode:
    """
    Node of the tidy tree walk (Buchheim et al. linear-time Walker).
    x is in sibling-distance units, y in depth levels.
    """

    __slots__ = ("key", "parent", "number", "children", "x", "y",
                 "_ancestor", "_thread", "_prelim", "_change", "_shift", "_mod")

    def __init__(self, key, parent=None, number=0):
        self.key = key
        self.parent = parent
        self.number = number
        self.children: List["TidyNode"] = []
        self.x, self.y = 0.0, 0.0
        self._ancestor = self
        self._thread = None
        self._prelim = 0.0
        self._change = 0.0
        self._shift = 0.0
        self._mod = 0.0

    def nodes(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


def build(root_key, children: Dict[object, List[object]]) -> TidyNode:
    root = TidyNode(root_key)
    stack = [root]
    while stack:
        node = stack.pop()
        for number, key in enumerate(children.get(node.key, [])):
            child = TidyNode(key, node, number)
            node.children.append(child)
            stack.append(child)
    return root


def tidy_positions(root_key, children: Dict[object, List[object]]) -> Dict[object, Tuple[float, int]]:
    """key -> (x in units, depth); leftmost node at x = 0."""
    root = build(root_key, children)
    _first_walk(root)
    _second_walk(root, -root._prelim)

    nodes = list(root.nodes())
    min_x = min(n.x for n in nodes)
    return {n.key: (n.x - min_x, int(n.y)) for n in nodes}


def _first_walk(v: TidyNode, left: TidyNode = None) -> None:
    if not v.children:
        if left:
            v._prelim = left._prelim + SEPARATION
        return

    default = v.children[0]
    previous = None
    for w in v.children:
        _first_walk(w, previous)
        default = _apportion(w, default, previous)
        previous = w
    _execute_shifts(v)

    midpoint = 0.5 * (v.children[0]._prelim + v.children[-1]._prelim)
    if left:
        v._prelim = left._prelim + SEPARATION
        v._mod = v._prelim - midpoint
    else:
        v._prelim = midpoint


def _apportion(v: TidyNode, default: TidyNode, left: TidyNode) -> TidyNode:
    if left is None:
        return default

    vir = vor = v
    vil = left
    vol = vir.parent.children[0]
    sir, sor, sil, sol = vir._mod, vor._mod, vil._mod, vol._mod

    while _next_right(vil) and _next_left(vir):
        vil = _next_right(vil)
        vir = _next_left(vir)
        vol = _next_left(vol)
        vor = _next_right(vor)
        vor._ancestor = v
        shift = (vil._prelim + sil) - (vir._prelim + sir) + SEPARATION
        if shift > 0.0:
            _move_subtree(_ancestor(vil, v, default), v, shift)
            sir += shift
            sor += shift
        sil += vil._mod
        sir += vir._mod
        sol += vol._mod
        sor += vor._mod

    if _next_right(vil) and not _next_right(vor):
        vor._thread = _next_right(vil)
        vor._mod += sil - sor
    if _next_left(vir) and not _next_left(vol):
        vol._thread = _next_left(vir)
        vol._mod += sir - sol
        default = v
    return default


def _next_left(v: TidyNode):
    return v.children[0] if v.children else v._thread


def _next_right(v: TidyNode):
    return v.children[-1] if v.children else v._thread


def _move_subtree(wl: TidyNode, wr: TidyNode, shift: float) -> None:
    subtrees = shift / (wr.number - wl.number)
    wr._change -= subtrees
    wr._shift += shift
    wl._change += subtrees
    wr._prelim += shift
    wr._mod += shift


def _execute_shifts(v: TidyNode) -> None:
    shift = 0.0
    change = 0.0
    for w in reversed(v.children):
        w._prelim += shift
        w._mod += shift
        change += w._change
        shift += w._shift + change


def _ancestor(vil: TidyNode, v: TidyNode, default: TidyNode) -> TidyNode:
    if vil._ancestor.parent is v.parent:
        return vil._ancestor
    return default


def _second_walk(root: TidyNode, m: float) -> None:
    stack = [(root, m, 0)]
    while stack:
        v, offset, level = stack.pop()
        v.x = v._prelim + offset
        v.y = level
        for w in v.children:
            stack.append((w, offset + v._mod, level + 1))
