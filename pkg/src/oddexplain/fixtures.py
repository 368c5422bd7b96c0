"""Built-in example classifiers used by the demos and the test suite."""

import random

from .classifiers import LatentTreeClassifier, NaiveBayesClassifier, TreeNode


def admissions_classifier():
    """University admissions screener over four yes/no features.

    Applicants are judged on work experience, first-time-applicant
    status, the entrance exam and GPA.  Every feature read positively
    raises the admission probability, so the screener is monotone.  The
    prior admission rate is 0.30 and the decision threshold 0.50.
    """
    return NaiveBayesClassifier.from_rates(
        feature_names=(
            "work-experience",
            "first-time-applicant",
            "entrance-exam",
            "gpa",
        ),
        false_positive=(0.10, 0.20, 0.15, 0.11),
        false_negative=(0.04, 0.30, 0.60, 0.03),
        prior=0.30,
        threshold=0.50,
    )


def roll_call_classifier(feature_count=16, seed=2016, threshold=0.5):
    """Deterministic 16-issue roll-call party classifier.

    Stands in for a classifier trained on real voting records when no
    dataset is supplied: each issue gets pseudo-random error rates, a
    few of them deliberately flipped in orientation so the classifier
    is not monotone.  The same seed always yields the same model.
    """
    rng = random.Random(seed)
    fp, fn = [], []
    for issue in range(feature_count):
        a = round(rng.uniform(0.04, 0.40), 3)
        b = round(rng.uniform(0.04, 0.40), 3)
        if issue % 5 == 4:
            # reversed issue: a yes-vote argues for the negative class
            a, b = max(a, 1.0 - b), max(b, 1.0 - a)
        fp.append(a)
        fn.append(b)
    return NaiveBayesClassifier.from_rates(
        feature_names=tuple(f"issue-{i + 1:02d}" for i in range(feature_count)),
        false_positive=tuple(fp),
        false_negative=tuple(fn),
        prior=0.39,
        threshold=threshold,
    )


def screening_tree():
    """Small diagnostic latent tree: two hidden markers, five tests.

    The binary condition sits at the root; marker-a (three states)
    mediates two tests and marker-b (two states) mediates three.
    """
    nodes = (
        TreeNode(
            name="condition",
            values=("absent", "present"),
            parent=None,
            cpt=((0.75, 0.25),),
        ),
        TreeNode(
            name="marker-a",
            values=("low", "mid", "high"),
            parent=0,
            cpt=((0.70, 0.25, 0.05), (0.10, 0.30, 0.60)),
        ),
        TreeNode(
            name="test-1",
            values=("-", "+"),
            parent=1,
            cpt=((0.90, 0.10), (0.55, 0.45), (0.15, 0.85)),
        ),
        TreeNode(
            name="test-2",
            values=("-", "+"),
            parent=1,
            cpt=((0.85, 0.15), (0.40, 0.60), (0.20, 0.80)),
        ),
        TreeNode(
            name="marker-b",
            values=("neg", "pos"),
            parent=0,
            cpt=((0.80, 0.20), (0.15, 0.85)),
        ),
        TreeNode(
            name="test-3",
            values=("-", "+"),
            parent=4,
            cpt=((0.88, 0.12), (0.25, 0.75)),
        ),
        TreeNode(
            name="test-4",
            values=("-", "+"),
            parent=4,
            cpt=((0.70, 0.30), (0.35, 0.65)),
        ),
        TreeNode(
            name="test-5",
            values=("-", "+"),
            parent=4,
            cpt=((0.92, 0.08), (0.30, 0.70)),
        ),
    )
    return LatentTreeClassifier(nodes=nodes, threshold=0.5)
