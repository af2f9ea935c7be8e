"""
Corner packing tree (B*-tree) stored as an index arena.

A left child sits horizontally adjacent to its parent, a right child sits
on top of it. Node indices are stable under attach and mutation; detach
rebuilds the arena compactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum
from typing import Optional, Sequence

import numpy as np

NIL = -1

# (macro_id, left, right) with None for an absent child
Nested = Optional[tuple]


class Corner(IntEnum):
    BL = 0
    BR = 1
    TL = 2
    TR = 3


@dataclass
class TreeNode:
    macro_id: int
    left: int = NIL
    right: int = NIL
    parent: int = NIL


@dataclass(frozen=True)
class SlotRef:
    """An empty child position: (parent node, 'left' | 'right'), or the root of an empty tree."""
    parent: int
    side: str

    @property
    def is_root(self) -> bool:
        return self.parent == NIL


class PackingTree:
    def __init__(self, corner: Corner, nodes: Optional[list[TreeNode]] = None, root: int = NIL):
        self.corner = Corner(corner)
        self.nodes: list[TreeNode] = nodes if nodes is not None else []
        self.root = root

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return f"PackingTree({self.corner.name}, {self.to_nested()!r})"

    def copy(self) -> PackingTree:
        return PackingTree(self.corner, [replace(n) for n in self.nodes], self.root)

    @property
    def macro_ids(self) -> list[int]:
        return [n.macro_id for n in self.nodes]

    # -------------------------------------------------------------------------
    # Traversal
    # -------------------------------------------------------------------------

    def preorder(self, start: Optional[int] = None) -> list[int]:
        start = self.root if start is None else start
        if start == NIL:
            return []
        order, stack = [], [start]
        while stack:
            idx = stack.pop()
            order.append(idx)
            node = self.nodes[idx]
            if node.right != NIL:
                stack.append(node.right)
            if node.left != NIL:
                stack.append(node.left)
        return order

    def subtree_nodes(self, start: int) -> list[int]:
        return self.preorder(start)

    def is_proper(self) -> bool:
        """Every node reachable exactly once from the root with consistent parent links."""
        if not self.nodes:
            return self.root == NIL
        if self.root == NIL or self.nodes[self.root].parent != NIL:
            return False
        seen: set[int] = set()
        for idx in self.preorder():
            if idx in seen:
                return False
            seen.add(idx)
            node = self.nodes[idx]
            for child in (node.left, node.right):
                if child != NIL and self.nodes[child].parent != idx:
                    return False
        return len(seen) == len(self.nodes)

    # -------------------------------------------------------------------------
    # Structural form
    # -------------------------------------------------------------------------

    def to_nested(self, start: Optional[int] = None) -> Nested:
        start = self.root if start is None else start
        if start == NIL:
            return None
        node = self.nodes[start]
        return (node.macro_id, self.to_nested(node.left), self.to_nested(node.right))

    @classmethod
    def from_nested(cls, corner: Corner, nested: Nested) -> PackingTree:
        tree = cls(corner)
        if nested is None:
            return tree

        def build(item: tuple, parent: int) -> int:
            idx = len(tree.nodes)
            tree.nodes.append(TreeNode(macro_id=item[0], parent=parent))
            if item[1] is not None:
                tree.nodes[idx].left = build(item[1], idx)
            if item[2] is not None:
                tree.nodes[idx].right = build(item[2], idx)
            return idx

        tree.root = build(nested, NIL)
        return tree

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        """Indented dump, one node per line, children tagged L/R."""
        lines = [f"{self.corner.name}:"]
        if self.root == NIL:
            lines.append("  (empty)")
            return "\n".join(lines) + "\n"
        stack = [(self.root, 1, "*")]
        while stack:
            idx, depth, tag = stack.pop()
            node = self.nodes[idx]
            label = names[node.macro_id] if names is not None else str(node.macro_id)
            lines.append(f"{'  ' * depth}{tag} {label}")
            if node.right != NIL:
                stack.append((node.right, depth + 1, "R"))
            if node.left != NIL:
                stack.append((node.left, depth + 1, "L"))
        return "\n".join(lines) + "\n"

    # -------------------------------------------------------------------------
    # In-place edits (callers work on copies)
    # -------------------------------------------------------------------------

    def _replace_child(self, parent: int, old: int, new: int) -> None:
        if parent == NIL:
            self.root = new
            return
        node = self.nodes[parent]
        if node.left == old:
            node.left = new
        else:
            node.right = new

    def swap_children(self, idx: int) -> None:
        node = self.nodes[idx]
        node.left, node.right = node.right, node.left

    def rotate_left(self, idx: int) -> bool:
        x = self.nodes[idx]
        y_idx = x.right
        if y_idx == NIL:
            return False
        y = self.nodes[y_idx]
        x.right = y.left
        if y.left != NIL:
            self.nodes[y.left].parent = idx
        self._replace_child(x.parent, idx, y_idx)
        y.parent = x.parent
        y.left = idx
        x.parent = y_idx
        return True

    def rotate_right(self, idx: int) -> bool:
        x = self.nodes[idx]
        y_idx = x.left
        if y_idx == NIL:
            return False
        y = self.nodes[y_idx]
        x.left = y.right
        if y.right != NIL:
            self.nodes[y.right].parent = idx
        self._replace_child(x.parent, idx, y_idx)
        y.parent = x.parent
        y.right = idx
        x.parent = y_idx
        return True


# =============================================================================
# Slots
# =============================================================================

def enumerate_slots(tree: PackingTree) -> list[SlotRef]:
    """All k+1 empty child positions of a k-node tree, in pre-order (left before right)."""
    if tree.root == NIL:
        return [SlotRef(NIL, "root")]
    slots = []
    for idx in tree.preorder():
        node = tree.nodes[idx]
        if node.left == NIL:
            slots.append(SlotRef(idx, "left"))
        if node.right == NIL:
            slots.append(SlotRef(idx, "right"))
    return slots


def attach_subtree(
    tree: PackingTree,
    slot: SlotRef,
    macro_ids: Sequence[int],
    rng: np.random.Generator,
) -> tuple[PackingTree, int]:
    """
    Hang a random binary tree over macro_ids at an empty slot.

    Returns the new tree and the index of the subtree root. New nodes take
    indices len(tree) .. len(tree) + len(macro_ids) - 1.
    """
    if not macro_ids:
        raise ValueError("cannot attach an empty group")
    out = tree.copy()
    order = [macro_ids[i] for i in rng.permutation(len(macro_ids))]
    base = len(out.nodes)

    sub_root = base
    out.nodes.append(TreeNode(macro_id=int(order[0]), parent=slot.parent))
    if slot.is_root:
        if out.root != NIL:
            raise ValueError("root slot is only valid for an empty tree")
        out.root = sub_root
    else:
        parent = out.nodes[slot.parent]
        if getattr(parent, slot.side) != NIL:
            raise ValueError(f"slot {slot} is occupied")
        setattr(parent, slot.side, sub_root)

    open_slots = [(sub_root, "left"), (sub_root, "right")]
    for macro in order[1:]:
        pick = int(rng.integers(len(open_slots)))
        parent_idx, side = open_slots.pop(pick)
        idx = len(out.nodes)
        out.nodes.append(TreeNode(macro_id=int(macro), parent=parent_idx))
        setattr(out.nodes[parent_idx], side, idx)
        open_slots.extend([(idx, "left"), (idx, "right")])
    return out, sub_root


def detach_subtree(tree: PackingTree, idx: int) -> PackingTree:
    """Remove the subtree rooted at idx; the arena is rebuilt compactly."""
    parent = tree.nodes[idx].parent
    out = tree.copy()
    out._replace_child(parent, idx, NIL)
    if parent == NIL:
        out.root = NIL
    return PackingTree.from_nested(tree.corner, out.to_nested())
