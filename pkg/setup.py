from setuptools import setup

setup(
    name="quasi-poisson-checker",
    version="0.1.0",
    description="Exact symbolic verification of quasi-Poisson structures",
    py_modules=[
        "polynomial_patterns",
        "symbolic_core",
        "report",
        "quadratic_lie",
        "chart_geometry",
        "graded_poisson",
        "courant",
        "fixtures",
        "schema",
        "qpg",
    ],
    install_requires=[
        "sympy",
        "regex",
        "tabulate",
        "pandas",
        "openpyxl",
    ],
    entry_points={"console_scripts": ["qpg=qpg:main"]},
)
