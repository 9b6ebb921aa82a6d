"""Revisioned API definitions: evolution tracking, derivation, conversion.

The pieces compose as a pipeline:

- :mod:`apirev.adl` parses and validates definition texts;
- :mod:`apirev.revisions` relates consecutive revisions and keeps the
  accepted history;
- :mod:`apirev.changes` classifies what happened between two revisions;
- :mod:`apirev.schema` derives the public wire schema of one revision;
- :mod:`apirev.internal` merges a supported window into the provider's
  internal representation;
- :mod:`apirev.resolution` matches a pinned client against a provider
  revision;
- :mod:`apirev.convert` translates payload values between a client's
  view and the internal form;
- :mod:`apirev.wire` encodes and decodes values canonically;
- :mod:`apirev.registry` persists histories, windows, and clients;
- :mod:`apirev.cli` exposes all of it as commands.
"""

from __future__ import annotations

from .adl import DefinitionError, parse_definition, validate_definition
from .changes import ChangeSet, diff
from .convert import ConversionError, UnrepresentableValue, to_client, to_internal
from .errors import ApiRevError
from .internal import InternalDerivationError, InternalRepresentation, derive_internal
from .registry import (
    ClientsStillReferencing,
    Registry,
    RegistryError,
    UnknownApi,
    UnknownClient,
)
from .resolution import (
    ClientDefinition,
    ResolutionError,
    ResolutionMap,
    resolve,
)
from .revisions import (
    EvolutionError,
    RevisionHistory,
    append_revision,
    composed_predecessors,
    empty_history,
    history_from_texts,
    relate,
)
from .schema import Schema, SchemaError, derive_schema
from .values import RecordValue
from .wire import DecodeError, Direction, EncodeError, decode_record, encode_record

__version__ = "0.1.0"

__all__ = [
    "ApiRevError",
    "ChangeSet",
    "ClientDefinition",
    "ClientsStillReferencing",
    "ConversionError",
    "DecodeError",
    "DefinitionError",
    "Direction",
    "EncodeError",
    "EvolutionError",
    "InternalDerivationError",
    "InternalRepresentation",
    "RecordValue",
    "Registry",
    "RegistryError",
    "ResolutionError",
    "ResolutionMap",
    "RevisionHistory",
    "Schema",
    "SchemaError",
    "UnknownApi",
    "UnknownClient",
    "UnrepresentableValue",
    "append_revision",
    "composed_predecessors",
    "decode_record",
    "derive_internal",
    "derive_schema",
    "diff",
    "empty_history",
    "encode_record",
    "history_from_texts",
    "parse_definition",
    "relate",
    "resolve",
    "to_client",
    "to_internal",
    "validate_definition",
    "__version__",
]
