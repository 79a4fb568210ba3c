# check_setup.py
import importlib
import os
import sys

REQUIRED_PACKAGES = ["dotenv", "pandas", "colorama", "pytest", "sympy", "mpmath"]


def check_environment():
    print("🔍 Démarrage du 'Sanity Check'...\n")
    all_good = True

    # 1. Vérification Python
    version = sys.version_info
    if (version.major, version.minor) >= (3, 10):
        print(f"✅ Python Version: {version.major}.{version.minor}")
    else:
        print(f"❌ Python Version: {version.major}.{version.minor} (Requis: 3.10 ou plus)")
        all_good = False

    # 2. Vérification des dépendances
    for package in REQUIRED_PACKAGES:
        try:
            importlib.import_module(package)
            print(f"✅ Paquet {package} importable.")
        except ImportError:
            print(f"❌ Paquet {package} manquant (pip install -r requirements.txt).")
            all_good = False

    # 3. Fichier .env (optionnel)
    if os.path.exists(".env"):
        from dotenv import load_dotenv
        load_dotenv()
        print("✅ Fichier .env détecté.")
    else:
        print("ℹ️ Pas de fichier .env : valeurs par défaut utilisées (voir .env.example).")

    # 4. Vérification Logs
    if not os.path.exists("logs"):
        os.makedirs("logs")
        print("✅ Dossier logs/ créé.")

    # 5. Fichier de coefficients externes (optionnel)
    coeffs = os.getenv("QUADRANK_COEFFS")
    if coeffs:
        from src.tools.file_operations import FileOperations
        from src.utils.errors import MalformedInput
        try:
            table = FileOperations.load_coefficients(coeffs)
            print(f"✅ Coefficients externes lus pour d ∈ {sorted(table)}.")
        except (FileNotFoundError, MalformedInput) as e:
            print(f"❌ Fichier de coefficients illisible : {e}")
            all_good = False
    else:
        print("ℹ️ Aucun fichier de coefficients : seul b₁(4) (dérivé) est disponible.")

    if all_good:
        print("\n🚀 TOUT EST PRÊT ! Vous pouvez commencer.")
    else:
        print("\n⚠️ CORRIGEZ LES ERREURS AVANT DE CONTINUER.")
    return all_good


if __name__ == "__main__":
    sys.exit(0 if check_environment() else 1)
