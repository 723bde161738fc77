"""
FileUtils module for reading JSON input documents and writing result files.

Reading keeps track of the line every JSON value starts on, so validation errors can point
at the offending entry. Writing is atomic: the content goes to a temporary file in the
target directory which then replaces the destination.
"""


import bisect
import json
import logging
import os
import re
import tempfile

from json.decoder import scanstring

import pandas as pd

from ..errors import SpecValidationError



logger = logging.getLogger(__name__)

_WHITESPACE = re.compile(r"[ \t\n\r]*")


class FileUtils:

    @staticmethod
    def read_json(path: str):
        """Reads and decodes a JSON document.

        Args:
            path (str): The file to read.

        Returns:
            tuple[Any, dict[str, int]]: The decoded document and a mapping from JSON paths
                (`atoms[2]`, `fibers[0].fiber[1]`, ...) to the line each value starts on.

        Raises:
            SpecValidationError: If the file is missing, unreadable, or not valid JSON.
        """
        if not os.path.isfile(path):
            raise SpecValidationError(f"Input file does not exist: {path}")

        logger.info("Reading %s", path)
        try:
            with open(path, encoding="utf-8") as handle:
                text = handle.read()
        except (OSError, UnicodeDecodeError) as e:
            raise SpecValidationError(f"Cannot read {path}: {e}") from None

        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecValidationError(f"Invalid JSON in {path}: {e.msg}", line=e.lineno, column=e.colno) from None

        return data, FileUtils.index_lines(text)

    @staticmethod
    def index_lines(text: str):
        """Maps the JSON path of every value in a valid document to its 1-based line."""
        newlines = [i for i, ch in enumerate(text) if ch == "\n"]
        decoder = json.JSONDecoder()
        lines: dict[str, int] = {}

        def skip(i: int):
            return _WHITESPACE.match(text, i).end()

        def walk(i: int, path: str):
            i = skip(i)
            lines[path] = bisect.bisect_left(newlines, i) + 1
            ch = text[i]

            if ch == "{":
                i = skip(i + 1)
                if text[i] == "}":
                    return i + 1
                while True:
                    key, i = scanstring(text, skip(i) + 1)
                    i = skip(i) + 1
                    i = skip(walk(i, key if path == "$" else f"{path}.{key}"))
                    if text[i] == ",":
                        i += 1
                        continue
                    return i + 1

            if ch == "[":
                i = skip(i + 1)
                if text[i] == "]":
                    return i + 1
                k = 0
                while True:
                    i = skip(walk(i, f"[{k}]" if path == "$" else f"{path}[{k}]"))
                    k += 1
                    if text[i] == ",":
                        i += 1
                        continue
                    return i + 1

            _, end = decoder.raw_decode(text, i)
            return end

        walk(0, "$")
        return lines

    @staticmethod
    def write_atomic(path: str, text: str):
        """Writes `text` to `path` through a temporary file and `os.replace`."""
        target = os.path.abspath(path)
        folder = os.path.dirname(target)
        os.makedirs(folder, exist_ok=True)

        handle = tempfile.NamedTemporaryFile(
            mode="w", encoding="utf-8", newline="", dir=folder,
            prefix=f".{os.path.basename(target)}.", suffix=".tmp", delete=False)
        try:
            with handle:
                handle.write(text)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(handle.name, target)
        except BaseException:
            if os.path.exists(handle.name):
                os.remove(handle.name)
            raise

        logger.info("Wrote %s", target)

    @staticmethod
    def csv_text(frame: pd.DataFrame, manifest: dict, trailer: list[str]=None):
        """Renders a manifest line, the table with 17 significant digits, and `#` trailer lines."""
        header = f"# manifest: {json.dumps(manifest, sort_keys=True)}\n"
        body = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
        tail = "".join(f"# {line}\n" for line in (trailer or []))
        return header + body + tail

    @staticmethod
    def write_csv(path: str, frame: pd.DataFrame, manifest: dict, trailer: list[str]=None):
        FileUtils.write_atomic(path, FileUtils.csv_text(frame, manifest, trailer))

    @staticmethod
    def write_json(path: str, payload: dict):
        FileUtils.write_atomic(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
