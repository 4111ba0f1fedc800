"""Knowledge-driven NLU: controlled English to facts, reasoning, answers.

The pipeline: tokenize and parse a sentence (`kdnlu.syntax`), match the
tree against verb frames and instantiate their semantic templates into
timestamped facts (`kdnlu.lexicon`, `kdnlu.semgen`), then reason over the
facts plus commonsense rules with a goal-directed stratified-negation
engine that justifies every answer (`kdnlu.engine`, `kdnlu.knowledge`).
`kdnlu.dialog` runs the reservation agent on the same stack and
`kdnlu.harness` holds the dataset runners, CLI, and HTTP service.
"""

__version__ = "0.1.0"
