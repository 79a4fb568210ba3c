import json
import os
import sys
import uuid
from datetime import datetime
from enum import Enum

from colorama import Fore, Style

# Chemin par défaut du journal des calculs (surchargé par QUADRANK_LOG_FILE)
DEFAULT_LOG_FILE = os.path.join("logs", "computation_log.json")


class ActionType(str, Enum):
    """
    Énumération des types de calculs journalisés.
    """
    ENUMERATION = "ENUMERATION"    # Parcours exhaustifs : idéaux, indécomposables, vecteurs courts
    EVALUATION = "EVALUATION"      # Valeurs spéciales, bornes, seuils
    DERIVATION = "DERIVATION"      # Coefficients dérivés (b₁(4))
    VERIFICATION = "VERIFICATION"  # Suites de vérification croisée


def get_log_file() -> str:
    return os.getenv("QUADRANK_LOG_FILE", DEFAULT_LOG_FILE)


def log_computation(component: str, action: ActionType, details: dict, status: str):
    """
    Enregistre un calcul dans le journal JSON.

    Args:
        component (str): Composant à l'origine du calcul (ex: "Zeta", "Verifier").
        action (ActionType): Le type de calcul effectué (utiliser l'Enum ActionType).
        details (dict): Détails du calcul. DOIT contenir 'inputs' et 'result'.
        status (str): "SUCCESS", "FAILURE" ou "PARTIAL".

    Raises:
        ValueError: Si les champs obligatoires sont manquants dans 'details' ou si l'action est invalide.
    """

    # --- 1. VALIDATION DU TYPE D'ACTION ---
    valid_actions = [a.value for a in ActionType]
    if isinstance(action, ActionType):
        action_str = action.value
    elif action in valid_actions:
        action_str = action
    else:
        raise ValueError(f"❌ Action invalide : '{action}'. Utilisez la classe ActionType (ex: ActionType.EVALUATION).")

    # --- 2. VALIDATION STRICTE DES DONNÉES ---
    # Un calcul sans ses entrées ni son résultat n'est pas reproductible.
    required_keys = ["inputs", "result"]
    missing_keys = [key for key in required_keys if key not in details]
    if missing_keys:
        raise ValueError(
            f"❌ Erreur de Logging (Composant: {component}) : "
            f"Les champs {missing_keys} sont manquants dans le dictionnaire 'details'."
        )

    # --- 3. PRÉPARATION DE L'ENTRÉE ---
    log_file = get_log_file()
    log_dir = os.path.dirname(log_file)
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)

    entry = {
        "id": str(uuid.uuid4()),
        "timestamp": datetime.now().isoformat(),
        "component": component,
        "action": action_str,
        "details": details,
        "status": status
    }

    # --- 4. LECTURE & ÉCRITURE ROBUSTE ---
    data = []
    if os.path.exists(log_file):
        try:
            with open(log_file, 'r', encoding='utf-8') as f:
                content = f.read().strip()
                if content:
                    data = json.loads(content)
        except json.JSONDecodeError:
            print(f"⚠️ Attention : Le fichier de logs {log_file} était corrompu. Une nouvelle liste a été créée.", file=sys.stderr)
            data = []

    data.append(entry)

    with open(log_file, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=4, ensure_ascii=False, default=str)


# --- Messages de progression (stderr, colorés) ---
_COLORS = {"info": Fore.CYAN, "ok": Fore.GREEN, "warn": Fore.YELLOW, "error": Fore.RED}


def announce(message: str, level: str = "info"):
    """Affiche une ligne de progression sur stderr (stdout reste réservé au JSON/CSV)."""
    if os.getenv("QUADRANK_QUIET"):
        return
    print(f"{_COLORS.get(level, '')}{message}{Style.RESET_ALL}", file=sys.stderr)
