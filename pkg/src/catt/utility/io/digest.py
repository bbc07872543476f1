from hashlib import sha256
from json import dumps
from typing import Any


def canonical_digest(payload: Any) -> str:
    """
    Digest a JSON-serializable payload independently of key order and whitespace.

    Args:
        payload (Any): Object made of dicts, lists, strings and numbers.

    Returns:
        str: Hexadecimal SHA256 digest of the canonical JSON encoding.
    """
    encoded = dumps(payload, sort_keys=True, separators=(",", ":"))
    return sha256(encoded.encode("utf-8")).hexdigest()
