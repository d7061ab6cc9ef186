"""
JSON formats for groupoids, functors, spans, words, bisets and G-sets,
plus delimited table output.

Arbitrary integer ids are accepted on input and remapped to contiguous
indices (sorted by the given id); output always uses internal indices.
"""

from __future__ import annotations

import csv
import io
import json

from . import groups, words
from .bisets import Biset
from .groupoids import FiniteGroupoid, GroupoidFunctor
from .gsets import GSet
from .spans import Span


class ParseError(ValueError):
    pass


def groupoid_to_json(G):
    return {
        "objects": list(G.objects),
        "arrows": [{"id": a, "src": G.src[a], "tgt": G.tgt[a]}
                   for a in range(G.num_arrows)],
        "compose": [[g, f, h] for (g, f), h in sorted(G.compose_table.items())],
        "identity": [[x, G.identity[x]] for x in G.objects],
        "label": G.label,
    }


def groupoid_from_json(data, label=None):
    try:
        objs = sorted(data["objects"])
        obj_index = {x: i for i, x in enumerate(objs)}
        arrows = sorted(data["arrows"], key=lambda d: d["id"])
        arr_index = {d["id"]: i for i, d in enumerate(arrows)}
        src = [obj_index[d["src"]] for d in arrows]
        tgt = [obj_index[d["tgt"]] for d in arrows]
        table = {(arr_index[g], arr_index[f]): arr_index[h]
                 for g, f, h in data["compose"]}
        identity = [0] * len(objs)
        for x, a in data["identity"]:
            identity[obj_index[x]] = arr_index[a]
        return FiniteGroupoid(len(objs), src, tgt, table, identity,
                              label=data.get("label") or label)
    except ParseError:
        raise
    except (KeyError, TypeError, IndexError) as e:
        raise ParseError("bad groupoid JSON: %s" % e)


def _group_ref(data, context=""):
    """A group given by registry name or inline groupoid JSON."""
    if isinstance(data, str):
        try:
            return groups.named_group(data)
        except KeyError as e:
            raise ParseError(str(e))
    if isinstance(data, dict):
        return groupoid_from_json(data)
    raise ParseError("bad group reference%s" % (" in " + context if context else ""))


def functor_to_json(F, embed=True):
    out = {"object_map": [[x, F.on_obj(x)] for x in F.source.objects],
           "arrow_map": [[a, F.on_arrow(a)] for a in range(F.source.num_arrows)]}
    if embed:
        out["source"] = groupoid_to_json(F.source)
        out["target"] = groupoid_to_json(F.target)
    return out


def functor_from_json(data, source=None, target=None):
    try:
        S = source if source is not None else groupoid_from_json(data["source"])
        T = target if target is not None else groupoid_from_json(data["target"])
        obj_map = [0] * S.num_objects
        for x, y in data["object_map"]:
            obj_map[x] = y
        arr_map = [0] * S.num_arrows
        for a, b in data["arrow_map"]:
            arr_map[a] = b
        return GroupoidFunctor(S, T, tuple(obj_map), tuple(arr_map))
    except ParseError:
        raise
    except (KeyError, TypeError, IndexError, ValueError) as e:
        raise ParseError("bad functor JSON: %s" % e)


def span_to_json(s):
    return {"apex": groupoid_to_json(s.apex),
            "left": functor_to_json(s.left_leg, embed=False),
            "right": functor_to_json(s.right_leg, embed=False),
            "src": groupoid_to_json(s.src),
            "dst": groupoid_to_json(s.dst)}


def span_from_json(data, src=None, dst=None):
    apex = groupoid_from_json(data["apex"])
    if src is None:
        src = groupoid_from_json(data["src"]) if "src" in data else None
    if dst is None:
        dst = groupoid_from_json(data["dst"]) if "dst" in data else None
    left = functor_from_json(data["left"], source=apex, target=src)
    right = functor_from_json(data["right"], source=apex, target=dst)
    return Span(left, right)


def letter_from_json(data):
    try:
        kind = data["kind"]
        if kind in ("Res", "Ind"):
            G = _group_ref(data["group"], kind)
            return (words.res if kind == "Res" else words.ind)(G, frozenset(data["subgroup"]))
        if kind in ("Infl", "Defl"):
            G = _group_ref(data["group"], kind)
            return (words.infl if kind == "Infl" else words.defl)(G, frozenset(data["normal"]))
        if kind == "Iso":
            S = _group_ref(data["source"], "Iso")
            T = _group_ref(data["target"], "Iso")
            amap = [0] * S.num_arrows
            for a, b in data["map"]:
                amap[a] = b
            return words.iso(groups.hom_functor(S, T, amap))
        raise ParseError("unknown letter kind %r" % kind)
    except ParseError:
        raise
    except (KeyError, TypeError, IndexError, ValueError) as e:
        raise ParseError("bad letter JSON: %s" % e)


def word_from_json(data):
    if isinstance(data, list):
        data = {"letters": data}
    letters = [letter_from_json(d) for d in data.get("letters", ())]
    if letters:
        try:
            return words.word(letters)
        except ValueError as e:
            raise ParseError(str(e))
    anchor = data.get("object")
    if anchor is None:
        raise ParseError("an empty word needs an \"object\" anchor")
    return words.word([], src=_group_ref(anchor, "word anchor"))


def biset_to_json(U):
    return {
        "source": groupoid_to_json(U.source),
        "target": groupoid_to_json(U.target),
        "elements": [{"id": u, "src_obj": U.src_obj[u], "tgt_obj": U.tgt_obj[u]}
                     for u in range(U.size)],
        "left_action": [[g, u, v] for (g, u), v in sorted(U.left.items())],
        "right_action": [[u, h, v] for (u, h), v in sorted(U.right.items())],
    }


def biset_from_json(data):
    try:
        H = groupoid_from_json(data["source"])
        G = groupoid_from_json(data["target"])
        elems = sorted(data["elements"], key=lambda d: d["id"])
        index = {d["id"]: i for i, d in enumerate(elems)}
        left = {(g, index[u]): index[v] for g, u, v in data["left_action"]}
        right = {(index[u], h): index[v] for u, h, v in data["right_action"]}
        return Biset(H, G,
                     tuple(d["src_obj"] for d in elems),
                     tuple(d["tgt_obj"] for d in elems), left, right)
    except ParseError:
        raise
    except (KeyError, TypeError, IndexError, ValueError) as e:
        raise ParseError("bad biset JSON: %s" % e)


def gset_to_json(X):
    return {"group": groupoid_to_json(X.group),
            "points": list(X.points),
            "action": [[g, x, y] for (g, x), y in sorted(X.action.items())]}


def gset_from_json(data):
    G = _group_ref(data["group"], "gset")
    pts = sorted(data["points"])
    pos = {p: i for i, p in enumerate(pts)}
    action = {(g, pos[x]): pos[y] for g, x, y in data["action"]}
    try:
        return GSet(G, len(pts), action)
    except (KeyError, ValueError) as e:
        raise ParseError("bad gset JSON: %s" % e)


def lincomb_to_json(lc):
    return {"ring": lc.ring.name,
            "terms": [{"coefficient": str(v), "key": k.render()}
                      for k, v in lc.sorted_terms()]}


def table_to_csv(keys, table):
    """Delimited form of a basis-indexed table of LinCombs."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    labels = [k.render() for k in keys]
    w.writerow([""] + labels)
    for i, row in enumerate(table):
        w.writerow([labels[i]] + [cell.render() for cell in row])
    return buf.getvalue()


def table_to_json(keys, table):
    return {"basis": [k.render() for k in keys],
            "entries": [[lincomb_to_json(cell) for cell in row] for row in table]}


def dump(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return text
