import io
import os
from collections import defaultdict
from fractions import Fraction
from typing import Dict, List

import pandas as pd

from src.utils.errors import MalformedInput


class FileOperations:
    """
    Lecture et écriture des fichiers de données (coefficients, tableaux de scan)
    """

    @staticmethod
    def read_file(file_path: str) -> str:
        """Lit le contenu d'un fichier texte

        Raises:
            FileNotFoundError: Si le fichier n'existe pas
        """
        if not os.path.exists(file_path):
            raise FileNotFoundError(f"Fichier introuvable: {file_path}")

        with open(file_path, 'r', encoding='utf-8') as f:
            return f.read()

    @staticmethod
    def write_file(file_path: str, content: str) -> None:
        """Écrit du contenu dans un fichier, en créant le répertoire parent si nécessaire"""
        abs_path = os.path.abspath(file_path)
        os.makedirs(os.path.dirname(abs_path), exist_ok=True)

        with open(file_path, 'w', encoding='utf-8') as f:
            f.write(content)

    @staticmethod
    def parse_coefficients(content: str, source: str = "<coefficients>") -> Dict[int, List[Fraction]]:
        """Parse les lignes "d ℓ p/q" d'un fichier de coefficients b_ℓ(2d)

        Les lignes vides et les commentaires (#) sont ignorés.

        Returns:
            Dict[int, List[Fraction]]: d -> [b_1(2d), ..., b_r(2d)]

        Raises:
            MalformedInput: ligne illisible, indice ℓ dupliqué ou manquant
        """
        table = defaultdict(dict)
        for lineno, raw in enumerate(content.splitlines(), start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise MalformedInput(f"{source}:{lineno}: expected 'd ℓ p/q', got {raw!r}")
            try:
                d, ell, value = int(parts[0]), int(parts[1]), Fraction(parts[2])
            except (ValueError, ZeroDivisionError):
                raise MalformedInput(f"{source}:{lineno}: unreadable entry {raw!r}")
            if d < 1 or ell < 1:
                raise MalformedInput(f"{source}:{lineno}: d and ℓ must be positive")
            if ell in table[d]:
                raise MalformedInput(f"{source}:{lineno}: duplicate b_{ell}({2 * d})")
            table[d][ell] = value

        coefficients = {}
        for d, entries in sorted(table.items()):
            if sorted(entries) != list(range(1, len(entries) + 1)):
                raise MalformedInput(f"{source}: indices for d={d} are not 1..{len(entries)}")
            coefficients[d] = [entries[ell] for ell in range(1, len(entries) + 1)]
        return coefficients

    @staticmethod
    def load_coefficients(file_path: str) -> Dict[int, List[Fraction]]:
        return FileOperations.parse_coefficients(FileOperations.read_file(file_path), file_path)

    @staticmethod
    def render_table(rows: List[Dict], fmt: str = "json") -> str:
        """Rend une liste de lignes homogènes en CSV ou en JSON (liste d'objets)"""
        frame = pd.DataFrame(rows)
        if fmt == "csv":
            buffer = io.StringIO()
            frame.to_csv(buffer, index=False)
            return buffer.getvalue()
        if fmt == "json":
            return frame.to_json(orient="records", force_ascii=False, indent=2)
        raise MalformedInput(f"unknown table format {fmt!r}")
