from setuptools import setup

setup(
        name="weakdeg",
        version="0.1.0",
        description="Weak degeneracy of graphs: deletion certificates, exact solver and regular-graph constructions",
        packages=["weakdeg"],
        python_requires=">=3.9",
        install_requires=[
            "networkx",
            "pyyaml"
            ],
        extras_require={
            "test": ["pytest"],
            "docs": ["pdoc3"]
            }
        )
