"""Command-line front end.

Exit codes: 0 on success, 1 for any domain failure (invalid definition,
rejected revision, failed conversion, registry problems), 2 for usage
errors, and 3 when ``convert`` cannot even resolve the client against
its pinned revision (so callers can tell resolution failures from value
failures).

The store root comes from ``--store``, then the ``APIREV_STORE``
environment variable, then ``./apirev-store``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import report
from .adl import parse_definition
from .bench import run_bench
from .changes import diff
from .convert import to_client, to_internal
from .errors import ApiRevError
from .registry import Registry
from .resolution import ClientDefinition, require_supported, resolve
from .values import from_jsonable, to_jsonable
from .wire import Direction, decode_record, encode_record

CONVERT_RESOLUTION_EXIT = 3


def _store(args: argparse.Namespace) -> Registry:
    root = args.store or os.environ.get("APIREV_STORE") or "apirev-store"
    return Registry(Path(root))


def _emit(args: argparse.Namespace, text: str, payload: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _read_input(path: "str | None") -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_output(path: "str | None", text: str) -> None:
    if path in (None, "-"):
        print(text, end="" if text.endswith("\n") else "\n")
    else:
        Path(path).write_text(text, encoding="utf-8")


def _revision_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.replace(",", " ").split()]
    except ValueError:
        raise ApiRevError(f"{text!r} is not a comma-separated revision list") from None


# ---- command handlers ---------------------------------------------------

def _cmd_validate(args: argparse.Namespace) -> int:
    from .schema import derive_schema

    definition = parse_definition(Path(args.file).read_text(encoding="utf-8"))
    schema = derive_schema(definition)
    _emit(
        args,
        report.render_definition_summary(schema),
        {
            "api": definition.name,
            "valid": True,
            "types": sorted(definition.types),
            "services": sorted(definition.services),
        },
    )
    return 0


def _cmd_publish(args: argparse.Namespace) -> int:
    store = _store(args)
    text = Path(args.file).read_text(encoding="utf-8")
    revision = store.publish(text)
    api_name = parse_definition(text).name
    lines = f"published {api_name} revision {revision}\n"
    payload: dict = {"api": api_name, "revision": revision}
    if revision > 1:
        changes = diff(store.history(api_name), revision - 1, revision)
        lines += report.render_changes(changes)
        payload["changes"] = report.changes_to_dict(changes)
    _emit(args, lines, payload)
    return 0


def _cmd_diff(args: argparse.Namespace) -> int:
    store = _store(args)
    changes = diff(store.history(args.api), args.from_revision, args.to_revision)
    _emit(args, report.render_changes(changes), report.changes_to_dict(changes))
    return 0


def _cmd_internal_rep(args: argparse.Namespace) -> int:
    store = _store(args)
    supported = _revision_list(args.supported) if args.supported else None
    rep = store.internal_representation(args.api, supported)
    _emit(args, report.render_internal(rep), report.internal_to_dict(rep))
    return 0


def _cmd_resolve(args: argparse.Namespace) -> int:
    store = _store(args)
    if args.client:
        plan = store.resolve_client(args.api, args.client)
    else:
        status = store.status(args.api)
        require_supported(args.revision, status.supported, args.api)
        client = ClientDefinition(
            parse_definition(Path(args.file).read_text(encoding="utf-8")), args.revision
        )
        provider = parse_definition(store.revision_text(args.api, args.revision))
        plan = resolve(client, provider)
    _emit(args, report.render_resolution(plan), report.resolution_to_dict(plan))
    return 0


def _parse_fallbacks(entries: "list[str] | None") -> dict[str, str]:
    fallbacks: dict[str, str] = {}
    for entry in entries or []:
        enum_name, sep, member = entry.partition("=")
        if not sep or not enum_name or not member:
            raise ApiRevError(f"{entry!r} is not of the form Enum=MEMBER")
        fallbacks[enum_name] = member
    return fallbacks


def _client_type_name(plan, requested: str) -> str:
    if requested in plan.client_schema.records:
        return requested
    for name, record in plan.client_schema.records.items():
        if record.alias == requested:
            return name
    raise ApiRevError(f"the client does not declare a record named {requested!r}")


def _cmd_convert(args: argparse.Namespace) -> int:
    store = _store(args)
    from .resolution import ResolutionError

    try:
        plan = store.resolve_client(args.api, args.client)
    except ResolutionError as err:
        print(f"error: {err}", file=sys.stderr)
        return CONVERT_RESOLUTION_EXIT
    rep = store.internal_representation(args.api)
    record_name = _client_type_name(plan, args.type)
    fallbacks = _parse_fallbacks(args.enum_fallback)
    document = json.loads(_read_input(args.input))
    value = from_jsonable(document)
    internal_name = rep.type_to_internal[(plan.provider_revision, record_name)]

    if args.direction == "request":
        request = encode_record(plan.client_schema, record_name, value, Direction.REQUEST)
        received = decode_record(plan.client_schema, record_name, request, Direction.REQUEST)
        internal = to_internal(rep, plan, record_name, received)
        encoded = encode_record(rep.schema, internal_name, internal, Direction.INTERNAL)
        out_value = internal
    else:
        converted = to_client(rep, plan, record_name, value, enum_fallbacks=fallbacks)
        encoded = encode_record(plan.client_schema, record_name, converted, Direction.RESPONSE)
        out_value = converted

    payload = {
        "api": args.api,
        "client": args.client,
        "revision": plan.provider_revision,
        "type": args.type,
        "direction": args.direction,
        "value": to_jsonable(out_value),
        "encoded_hex": encoded.hex(),
    }
    _write_output(args.output, json.dumps(payload, indent=2) + "\n")
    return 0


def _cmd_registry_status(args: argparse.Namespace) -> int:
    store = _store(args)
    names = [args.api] if args.api else store.api_names()
    if not names:
        _emit(args, "the store has no published APIs\n", {"apis": {}})
        return 0
    texts = []
    payload = {"apis": {}}
    for name in names:
        status = store.status(name)
        texts.append(report.render_status(status))
        payload["apis"][name] = report.status_to_dict(status)
    _emit(args, "".join(texts), payload)
    return 0


def _cmd_registry_set_supported(args: argparse.Namespace) -> int:
    store = _store(args)
    rep = store.set_supported(args.api, _revision_list(args.revisions), force=args.force)
    _emit(
        args,
        f"{args.api} now serves revisions {report.span_text(rep.supported)}\n",
        {"api": args.api, "supported": list(rep.supported)},
    )
    return 0


def _cmd_registry_register_client(args: argparse.Namespace) -> int:
    store = _store(args)
    text = Path(args.file).read_text(encoding="utf-8")
    plan = store.register_client(args.api, args.client_id, text, args.revision)
    _emit(
        args,
        f"registered {args.client_id} against {args.api} revision {args.revision}\n"
        + report.render_resolution(plan),
        {
            "api": args.api,
            "client": args.client_id,
            "revision": args.revision,
            "resolution": report.resolution_to_dict(plan),
        },
    )
    return 0


def _cmd_registry_drop_client(args: argparse.Namespace) -> int:
    store = _store(args)
    store.drop_client(args.api, args.client_id)
    _emit(
        args,
        f"dropped client {args.client_id} from {args.api}\n",
        {"api": args.api, "client": args.client_id},
    )
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    result = run_bench(iterations=args.iterations, report_dir=args.report_dir)
    _emit(args, result.render(), result.to_dict())
    return 0


# ---- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apirev",
        description="Publish revisioned API definitions, derive merged schemas, "
        "and convert payloads for pinned clients.",
    )
    parser.add_argument("--store", help="store root (default: $APIREV_STORE or ./apirev-store)")
    commands = parser.add_subparsers(dest="command", required=True)

    def with_json(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--json", action="store_true", help="emit JSON instead of text")
        return p

    p = with_json(commands.add_parser("validate", help="check one definition file"))
    p.add_argument("file")
    p.set_defaults(handler=_cmd_validate)

    p = with_json(commands.add_parser("publish", help="append one revision to its API"))
    p.add_argument("file")
    p.set_defaults(handler=_cmd_publish)

    p = with_json(commands.add_parser("diff", help="summarize changes between two revisions"))
    p.add_argument("api")
    p.add_argument("from_revision", type=int)
    p.add_argument("to_revision", type=int)
    p.set_defaults(handler=_cmd_diff)

    p = with_json(
        commands.add_parser("internal-rep", help="show the merged internal representation")
    )
    p.add_argument("api")
    p.add_argument("--supported", help="comma-separated revision ids (default: the stored set)")
    p.set_defaults(handler=_cmd_internal_rep)

    p = with_json(commands.add_parser("resolve", help="match a client against its revision"))
    p.add_argument("api")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--client", help="a registered client id")
    group.add_argument("--file", help="a client definition file")
    p.add_argument("--revision", type=int, help="provider revision for --file")
    p.set_defaults(handler=_cmd_resolve)

    p = commands.add_parser("convert", help="convert a payload for a registered client")
    p.add_argument("api")
    p.add_argument("--client", required=True)
    p.add_argument("--type", required=True, help="the client's record type of the payload")
    p.add_argument("--direction", choices=("request", "response"), required=True)
    p.add_argument("--in", dest="input", help="input JSON file (default: stdin)")
    p.add_argument("--out", dest="output", help="output JSON file (default: stdout)")
    p.add_argument(
        "--enum-fallback",
        action="append",
        metavar="ENUM=MEMBER",
        help="substitute MEMBER when a stored member of ENUM is unknown to the client",
    )
    p.set_defaults(handler=_cmd_convert)

    registry = commands.add_parser("registry", help="inspect and manage the store")
    registry_commands = registry.add_subparsers(dest="registry_command", required=True)

    p = with_json(registry_commands.add_parser("status", help="list APIs, revisions and clients"))
    p.add_argument("api", nargs="?")
    p.set_defaults(handler=_cmd_registry_status)

    p = with_json(
        registry_commands.add_parser("set-supported", help="choose the serving window")
    )
    p.add_argument("api")
    p.add_argument("--revisions", required=True)
    p.add_argument("--force", action="store_true", help="drop revisions even if clients are pinned")
    p.set_defaults(handler=_cmd_registry_set_supported)

    p = with_json(
        registry_commands.add_parser("register-client", help="pin a client definition to a revision")
    )
    p.add_argument("api")
    p.add_argument("client_id")
    p.add_argument("file")
    p.add_argument("--revision", type=int, required=True)
    p.set_defaults(handler=_cmd_registry_register_client)

    p = with_json(registry_commands.add_parser("drop-client", help="remove a registered client"))
    p.add_argument("api")
    p.add_argument("client_id")
    p.set_defaults(handler=_cmd_registry_drop_client)

    p = with_json(commands.add_parser("bench", help="measure the conversion round trip"))
    p.add_argument("--iterations", type=int, default=10000)
    p.add_argument("--report-dir", default="bench-report")
    p.set_defaults(handler=_cmd_bench)

    return parser


def main(argv: "list[str] | None" = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "resolve" and args.file and args.revision is None:
        parser.error("--file needs --revision")
    try:
        return args.handler(args)
    except ApiRevError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
