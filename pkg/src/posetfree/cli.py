"""Command-line interface: poset, family, embed, containers, census.

Output is machine-first: JSON (sorted keys) or CSV on stdout, with
``--pretty`` switching JSON to indented form and ``--out FILE`` redirecting
the payload to a file.  Exit codes: 0 on success,
1 on domain errors (invalid inputs, size caps, violated preconditions),
2 on usage errors.  Commands that sample require an explicit ``--seed`` so
every run is reproducible byte for byte.

File formats:

* poset: JSON ``{"m": int, "covers": [[child, parent], ...]}``
* family: text (first line n, then one 0/1 row of length n per member,
  character i set  ⇔  element i+1 present) or JSON
  ``{"n": int, "members": [mask, ...]}``
* container pair: JSON as emitted by ``containers run``
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .blowup import blowup
from .census import (
    count_p_free,
    e_lower,
    experiment_csv,
    experiment_table,
    la,
)
from .containers import (
    container_pair,
    container_pair_from_dict,
    container_pair_to_dict,
    two_phase,
    verify_pair,
)
from .embedding import contains_poset, first_copy
from .errors import (
    DomainError,
    InvalidMarkedChainError,
    NotPFreeError,
    PosetError,
    PreconditionError,
    TooLargeError,
)
from .grading import graded_chain_cover, graded_completion
from .lattice import (
    SetFamily,
    chain_profile,
    count_marked_chains,
    family_from_dict,
    family_from_text,
    family_to_dict,
    marked_chain_lower_bound,
    trim_alpha,
)
from .poset import (
    Poset,
    dual,
    height,
    is_graded,
    is_tree_poset,
    maximal_chains,
    poset_from_dict,
    poset_to_dict,
)

_DOMAIN_ERRORS = (
    DomainError,
    TooLargeError,
    PosetError,
    PreconditionError,
    NotPFreeError,
    InvalidMarkedChainError,
    ValueError,
    OSError,
)


def _load_poset(path: str) -> Poset:
    return poset_from_dict(json.loads(Path(path).read_text()))


def _load_family(path: str) -> SetFamily:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return family_from_dict(json.loads(text))
    return family_from_text(text)


def _load_pair(path: str):
    return container_pair_from_dict(json.loads(Path(path).read_text()))


def _write_output(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload) -> None:
    indent = 2 if args.pretty else None
    _write_output(args, json.dumps(payload, sort_keys=True, indent=indent) + "\n")


def _embedding_payload(emb) -> dict:
    if emb is None:
        return {"found": False, "assignment": None}
    return {"found": True, "assignment": list(emb.assignment)}


# ---------------------------------------------------------------- poset ---


def _cmd_poset_validate(args) -> int:
    poset = _load_poset(args.file)
    _emit_json(
        args,
        {
            "m": poset.m,
            "height": height(poset),
            "tree": is_tree_poset(poset),
            "graded": is_graded(poset),
        },
    )
    return 0


def _cmd_poset_height(args) -> int:
    _emit_json(args, height(_load_poset(args.file)))
    return 0


def _cmd_poset_chains(args) -> int:
    chains = maximal_chains(_load_poset(args.file))
    _emit_json(args, [list(chain) for chain in chains])
    return 0


def _cmd_poset_dual(args) -> int:
    _emit_json(args, poset_to_dict(dual(_load_poset(args.file))))
    return 0


def _cmd_poset_blowup(args) -> int:
    blow = blowup(_load_poset(args.file), args.root, args.t)
    payload = poset_to_dict(blow.base)
    payload["labels"] = [list(label) for label in blow.labels]
    payload["root"] = args.root
    payload["t"] = args.t
    _emit_json(args, payload)
    return 0


def _cmd_poset_cover(args) -> int:
    cover = graded_chain_cover(_load_poset(args.file))
    _emit_json(
        args,
        {
            "chains": [list(chain) for chain in cover.chains],
            "intervals": [list(ival) for ival in cover.intervals],
        },
    )
    return 0


def _cmd_poset_complete(args) -> int:
    completion = graded_completion(_load_poset(args.file))
    _emit_json(
        args,
        {
            "poset": poset_to_dict(completion.completed),
            "embedding": list(completion.embedding),
            "chain_count": completion.chain_count,
        },
    )
    return 0


# --------------------------------------------------------------- family ---


def _cmd_family_profile(args) -> int:
    profile = chain_profile(_load_family(args.file))
    _emit_json(
        args,
        {
            "n": profile.n,
            "counts": list(profile.counts),
            "mean_members": profile.mean_members(),
        },
    )
    return 0


def _cmd_family_marked(args) -> int:
    family = _load_family(args.file)
    payload = {"count": count_marked_chains(family, args.k, args.a)}
    if args.eps is not None:
        holds, bound = marked_chain_lower_bound(family, args.k, args.a, args.eps)
        payload.update({"holds": holds, "bound": bound})
    _emit_json(args, payload)
    return 0


def _cmd_family_trim(args) -> int:
    mid, tail = trim_alpha(_load_family(args.file), args.alpha)
    _emit_json(args, {"mid": family_to_dict(mid), "tail": family_to_dict(tail)})
    return 0


# ---------------------------------------------------------------- embed ---


def _cmd_embed_check(args) -> int:
    emb = contains_poset(_load_family(args.family), _load_poset(args.poset))
    _emit_json(args, _embedding_payload(emb))
    return 0


def _cmd_embed_first_copy(args) -> int:
    blow = blowup(_load_poset(args.poset), args.root, args.t)
    emb = first_copy(_load_family(args.family), blow)
    _emit_json(args, _embedding_payload(emb))
    return 0


# ----------------------------------------------------------- containers ---


def _cmd_containers_run(args) -> int:
    poset = _load_poset(args.poset)
    family = _load_family(args.family)
    if args.two_phase:
        t2 = None if args.t2 == "auto" else int(args.t2)
        pair = two_phase(poset, args.root, family.n, family, t1=args.t, t2=t2)
    else:
        if args.source is not None:
            source = _load_family(args.source)
        else:
            source = SetFamily(family.n, tuple(range(1 << family.n)))
        pair = container_pair(poset, args.root, args.t, source, family)
    _emit_json(args, container_pair_to_dict(pair))
    return 0


def _cmd_containers_verify(args) -> int:
    report = verify_pair(_load_pair(args.pair), _load_family(args.family))
    _emit_json(args, report)
    return 0


# --------------------------------------------------------------- census ---


def _cmd_census_count(args) -> int:
    _emit_json(args, count_p_free(args.n, _load_poset(args.poset), args.threads))
    return 0


def _cmd_census_la(args) -> int:
    _emit_json(args, la(args.n, _load_poset(args.poset)))
    return 0


def _cmd_census_e_lower(args) -> int:
    _emit_json(args, e_lower(_load_poset(args.poset), args.n))
    return 0


def _cmd_census_experiment(args) -> int:
    n_values = [int(part) for part in args.n.split(",") if part]
    t2 = None if args.t2 == "auto" else int(args.t2)
    rows = experiment_table(
        _load_poset(args.poset),
        n_values,
        t1=args.t1,
        t2=t2,
        seed=args.seed,
        samples=args.samples,
        root=args.root,
    )
    _write_output(args, experiment_csv(rows))
    return 0


# ----------------------------------------------------------------- main ---


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--pretty", action="store_true", help="indent JSON output"
    )
    common.add_argument(
        "--out", help="write output to this file instead of stdout"
    )

    parser = argparse.ArgumentParser(
        prog="posetfree",
        description="Exact combinatorics of families avoiding a tree poset.",
    )
    groups = parser.add_subparsers(dest="group", required=True)

    poset = groups.add_parser("poset", help="poset inspection and builds")
    psub = poset.add_subparsers(dest="command", required=True)
    p = psub.add_parser("validate", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=_cmd_poset_validate)
    p = psub.add_parser("height", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=_cmd_poset_height)
    p = psub.add_parser("chains", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=_cmd_poset_chains)
    p = psub.add_parser("dual", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=_cmd_poset_dual)
    p = psub.add_parser("blowup", parents=[common])
    p.add_argument("file")
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=_cmd_poset_blowup)
    p = psub.add_parser("cover", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=_cmd_poset_cover)
    p = psub.add_parser("complete", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=_cmd_poset_complete)

    family = groups.add_parser("family", help="set-family statistics")
    fsub = family.add_subparsers(dest="command", required=True)
    p = fsub.add_parser("profile", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=_cmd_family_profile)
    p = fsub.add_parser("marked", parents=[common])
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--eps", type=float)
    p.set_defaults(func=_cmd_family_marked)
    p = fsub.add_parser("trim", parents=[common])
    p.add_argument("file")
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=_cmd_family_trim)

    embed = groups.add_parser("embed", help="containment searches")
    esub = embed.add_subparsers(dest="command", required=True)
    p = esub.add_parser("check", parents=[common])
    p.add_argument("poset")
    p.add_argument("family")
    p.set_defaults(func=_cmd_embed_check)
    p = esub.add_parser("first-copy", parents=[common])
    p.add_argument("poset")
    p.add_argument("family")
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=_cmd_embed_first_copy)

    containers = groups.add_parser("containers", help="container pairs")
    csub = containers.add_subparsers(dest="command", required=True)
    p = csub.add_parser("run", parents=[common])
    p.add_argument("poset")
    p.add_argument("family")
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--two-phase", action="store_true", dest="two_phase")
    p.add_argument("--t2", default="auto", help="second multiplicity or 'auto'")
    p.add_argument("--source", help="source family file (default: whole cube)")
    p.set_defaults(func=_cmd_containers_run)
    p = csub.add_parser("verify", parents=[common])
    p.add_argument("pair")
    p.add_argument("family")
    p.set_defaults(func=_cmd_containers_verify)

    census = groups.add_parser("census", help="exhaustive ground truth")
    nsub = census.add_subparsers(dest="command", required=True)
    p = nsub.add_parser("count", parents=[common])
    p.add_argument("--poset", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_census_count)
    p = nsub.add_parser("la", parents=[common])
    p.add_argument("--poset", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_census_la)
    p = nsub.add_parser("e-lower", parents=[common])
    p.add_argument("--poset", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_census_e_lower)
    p = nsub.add_parser("experiment", parents=[common])
    p.add_argument("--poset", required=True)
    p.add_argument("--n", required=True, help="comma-separated cube sizes")
    p.add_argument("--t1", type=int)
    p.add_argument("--t2", default="auto")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--root", type=int, default=0)
    p.set_defaults(func=_cmd_census_experiment)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if (
            getattr(args, "func", None) is _cmd_containers_run
            and not args.two_phase
            and args.t is None
        ):
            parser.error("containers run: --t is required without --two-phase")
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
