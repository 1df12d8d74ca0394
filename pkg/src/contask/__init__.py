"""Exact chromatic complexes, subdivisions and continuous-task solvability tools."""
from .approx import DecisionMap, chromatic_approximation, verify_chromatic_approximation
from .chromap import PAMap, check_chromatic, chromatic_projection, evaluate, realize_simplicial
from .complex import Complex, Vertex, build_complex, simplex_complex
from .geometry import Point
from .subdivision import Subdivision, barycentric, chromatic, iterate_chromatic, mesh
from .task import Task, induced_task, search_decision_map, verify_solution

__all__ = [
    "Complex", "Vertex", "build_complex", "simplex_complex", "Point",
    "Subdivision", "barycentric", "chromatic", "iterate_chromatic", "mesh",
    "PAMap", "check_chromatic", "chromatic_projection", "evaluate", "realize_simplicial",
    "DecisionMap", "chromatic_approximation", "verify_chromatic_approximation",
    "Task", "induced_task", "search_decision_map", "verify_solution",
]
__version__ = "0.1.0"
