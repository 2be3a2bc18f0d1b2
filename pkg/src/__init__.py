"""
equisym - Représentations des fonctions symétriques, équivariantes et anti-symétriques
Bibliothèque et banc d'expériences reproductibles
"""

__version__ = "1.0.0"
__author__ = "equisym Team"
__description__ = "Bases symétriques, déterminants de Slater généralisés et réseaux équivariants"
