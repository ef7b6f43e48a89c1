"""alia: an advice-taking agent engine.

Natural-language rules, operators, and commands are compiled into
semantic-network structures; a three-level memory with depth-limited
forward chaining and an operator-driven action tree ground them in a
simulated robot.
"""

__version__ = "0.1.0"
