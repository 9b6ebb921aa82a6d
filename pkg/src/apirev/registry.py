"""File-backed store for published revisions and registered clients.

Layout, one directory per API under the store root::

    <root>/<api-name>/
        rev-1.api, rev-2.api, ...   immutable revision texts
        client-<id>.api             registered client definitions
        meta.json                   head, supported set, client index
    <root>/<api-name>.lock          advisory lock for writers

Revision files are never rewritten. Every mutation happens under an
exclusive ``fcntl`` lock and lands via a temp file and ``os.replace``,
so concurrent publishes linearize and readers always see a complete
``meta.json``.

Publishing only checks the predecessor relation against the current
head; the new revision then joins the supported set. Narrowing that set
is the validated lifecycle step: ``set_supported`` derives the merged
representation for the new set and refuses to drop revisions that
registered clients are still pinned to unless forced.
"""

from __future__ import annotations

import fcntl
import json
import os
import re
import time
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from .adl import ApiDefinition, parse_definition
from .errors import ApiRevError
from .internal import InternalRepresentation, derive_internal
from .resolution import ClientDefinition, ResolutionMap, require_supported, resolve
from .revisions import RevisionHistory, append_revision, empty_history, history_from_texts

_NAME_PATTERN = re.compile(r"^[A-Za-z][A-Za-z0-9_.-]*$")
_LOCK_TIMEOUT = 10.0


class RegistryError(ApiRevError):
    pass


class UnknownApi(RegistryError):
    def __init__(self, api_name: str):
        super().__init__(f"no API named {api_name!r} has been published")


class UnknownClient(RegistryError):
    def __init__(self, api_name: str, client_id: str):
        super().__init__(f"{api_name!r} has no registered client {client_id!r}")


class ConcurrentPublish(RegistryError):
    def __init__(self, api_name: str):
        super().__init__(f"another writer holds the lock for {api_name!r}")


class ClientsStillReferencing(RegistryError):
    def __init__(self, api_name: str, pinned: "list[tuple[str, int]]"):
        listing = ", ".join(f"{client} (revision {rev})" for client, rev in pinned)
        super().__init__(
            f"cannot drop revisions of {api_name!r} still referenced by: {listing}; "
            "re-register the clients or pass force"
        )
        self.pinned = pinned


@dataclass(frozen=True)
class ClientRecord:
    client_id: str
    revision: int
    text: str

    @property
    def definition(self) -> ApiDefinition:
        return parse_definition(self.text)


@dataclass(frozen=True)
class ApiStatus:
    api_name: str
    head: int
    supported: tuple[int, ...]
    clients: tuple[ClientRecord, ...]


class Registry:
    def __init__(self, root: "Path | str"):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    # ---- paths -------------------------------------------------------
    def _api_dir(self, api_name: str) -> Path:
        if not _NAME_PATTERN.match(api_name):
            raise RegistryError(f"{api_name!r} is not a usable API name")
        return self.root / api_name

    def _meta_path(self, api_name: str) -> Path:
        return self._api_dir(api_name) / "meta.json"

    def _revision_path(self, api_name: str, revision: int) -> Path:
        return self._api_dir(api_name) / f"rev-{revision}.api"

    def _client_path(self, api_name: str, client_id: str) -> Path:
        if not _NAME_PATTERN.match(client_id):
            raise RegistryError(f"{client_id!r} is not a usable client id")
        return self._api_dir(api_name) / f"client-{client_id}.api"

    # ---- low-level state ---------------------------------------------
    @contextmanager
    def _locked(self, api_name: str):
        lock_path = self.root / f"{api_name}.lock"
        with open(lock_path, "a+") as lock_file:
            deadline = time.monotonic() + _LOCK_TIMEOUT
            while True:
                try:
                    fcntl.flock(lock_file, fcntl.LOCK_EX | fcntl.LOCK_NB)
                    break
                except BlockingIOError:
                    if time.monotonic() >= deadline:
                        raise ConcurrentPublish(api_name) from None
                    time.sleep(0.01)
            try:
                yield
            finally:
                fcntl.flock(lock_file, fcntl.LOCK_UN)

    def _write_atomically(self, path: Path, text: str) -> None:
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)

    def _read_meta(self, api_name: str) -> dict:
        meta_path = self._meta_path(api_name)
        if not meta_path.exists():
            raise UnknownApi(api_name)
        return json.loads(meta_path.read_text(encoding="utf-8"))

    def _write_meta(self, api_name: str, meta: dict) -> None:
        self._write_atomically(self._meta_path(api_name), json.dumps(meta, indent=2) + "\n")

    # ---- reads ---------------------------------------------------------
    def api_names(self) -> list[str]:
        if not self.root.exists():
            return []
        return sorted(p.name for p in self.root.iterdir() if (p / "meta.json").exists())

    def status(self, api_name: str) -> ApiStatus:
        meta = self._read_meta(api_name)
        return ApiStatus(
            api_name=api_name,
            head=meta["head"],
            supported=tuple(meta["supported"]),
            clients=tuple(
                self.client(api_name, client_id) for client_id in sorted(meta["clients"])
            ),
        )

    def revision_text(self, api_name: str, revision: int) -> str:
        meta = self._read_meta(api_name)
        if not 1 <= revision <= meta["head"]:
            raise RegistryError(
                f"{api_name!r} has revisions 1..{meta['head']}, not {revision}"
            )
        return self._revision_path(api_name, revision).read_text(encoding="utf-8")

    def history(self, api_name: str) -> RevisionHistory:
        meta = self._read_meta(api_name)
        texts = [
            self._revision_path(api_name, r).read_text(encoding="utf-8")
            for r in range(1, meta["head"] + 1)
        ]
        return history_from_texts(api_name, texts)

    def internal_representation(
        self, api_name: str, supported: "tuple[int, ...] | list[int] | None" = None
    ) -> InternalRepresentation:
        if supported is None:
            supported = self.status(api_name).supported
        return derive_internal(self.history(api_name), supported)

    def client(self, api_name: str, client_id: str) -> ClientRecord:
        meta = self._read_meta(api_name)
        entry = meta["clients"].get(client_id)
        if entry is None:
            raise UnknownClient(api_name, client_id)
        text = self._client_path(api_name, client_id).read_text(encoding="utf-8")
        return ClientRecord(client_id, entry["revision"], text)

    def resolve_client(self, api_name: str, client_id: str) -> ResolutionMap:
        record = self.client(api_name, client_id)
        status = self.status(api_name)
        require_supported(record.revision, status.supported, api_name)
        provider = parse_definition(self.revision_text(api_name, record.revision))
        return resolve(ClientDefinition(record.definition, record.revision), provider)

    # ---- writes --------------------------------------------------------
    def publish(self, text: str) -> int:
        """Validate one revision text against the head and store it.

        Returns the new revision id. The API name comes from the text;
        the first publish of a name creates its directory.
        """
        definition = parse_definition(text)
        api_name = definition.name
        api_dir = self._api_dir(api_name)
        with self._locked(api_name):
            api_dir.mkdir(exist_ok=True)
            meta_path = self._meta_path(api_name)
            if meta_path.exists():
                meta = self._read_meta(api_name)
                history = self.history(api_name)
            else:
                meta = {"api": api_name, "head": 0, "supported": [], "clients": {}}
                history = empty_history(api_name)
            append_revision(history, definition)  # raises on a bad step
            new_id = meta["head"] + 1
            self._write_atomically(self._revision_path(api_name, new_id), text)
            meta["head"] = new_id
            meta["supported"] = sorted(set(meta["supported"]) | {new_id})
            self._write_meta(api_name, meta)
            return new_id

    def set_supported(
        self, api_name: str, supported: "list[int] | tuple[int, ...]", *, force: bool = False
    ) -> InternalRepresentation:
        """Choose the serving window; returns its merged representation.

        The new set must derive cleanly, and dropping a revision that a
        registered client is pinned to needs ``force``.
        """
        with self._locked(api_name):
            meta = self._read_meta(api_name)
            chosen = sorted(set(int(s) for s in supported))
            if not chosen:
                raise RegistryError("the supported set cannot be empty")
            out_of_range = [s for s in chosen if not 1 <= s <= meta["head"]]
            if out_of_range:
                raise RegistryError(
                    f"{api_name!r} has revisions 1..{meta['head']}; "
                    + ", ".join(str(s) for s in out_of_range)
                    + " cannot be supported"
                )
            if not force:
                pinned = sorted(
                    (client_id, entry["revision"])
                    for client_id, entry in meta["clients"].items()
                    if entry["revision"] not in chosen
                )
                if pinned:
                    raise ClientsStillReferencing(api_name, pinned)
            rep = derive_internal(self.history(api_name), chosen)
            meta["supported"] = chosen
            self._write_meta(api_name, meta)
            return rep

    def register_client(self, api_name: str, client_id: str, text: str, revision: int) -> ResolutionMap:
        """Validate and store one client definition; replaces any previous one."""
        definition = parse_definition(text)
        if definition.name != api_name:
            raise RegistryError(
                f"the client definition is written against {definition.name!r}, not {api_name!r}"
            )
        client_path = self._client_path(api_name, client_id)
        with self._locked(api_name):
            meta = self._read_meta(api_name)
            require_supported(revision, tuple(meta["supported"]), api_name)
            provider = parse_definition(self.revision_text(api_name, revision))
            plan = resolve(ClientDefinition(definition, revision), provider)
            self._write_atomically(client_path, text)
            meta["clients"][client_id] = {"revision": revision}
            self._write_meta(api_name, meta)
            return plan

    def drop_client(self, api_name: str, client_id: str) -> None:
        with self._locked(api_name):
            meta = self._read_meta(api_name)
            if client_id not in meta["clients"]:
                raise UnknownClient(api_name, client_id)
            del meta["clients"][client_id]
            self._write_meta(api_name, meta)
            self._client_path(api_name, client_id).unlink(missing_ok=True)
