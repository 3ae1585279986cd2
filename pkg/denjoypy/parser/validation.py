from typing import List, Optional, Tuple, Union

from denjoypy.exceptions.exceptions import EmptyWindowError


def jaccard_distance(s: str, d: str) -> float:
    """
    Calculate the Jaccard distance between two strings.

    The Jaccard distance is defined as the size of the intersection of the two character sets
    divided by the size of their union. For example, "cf" and "cfonce" share {"c", "f"} out of
    {"c", "f", "o", "n", "e"}, so their distance is 2/5.

    Parameters
    ----------
    s : str
        The first string.
    d : str
        The second string.

    Returns
    -------
    float
        The Jaccard distance between the two strings.
    """

    s = set(s)
    d = set(d)
    union = len(s.union(d))
    if union == 0:
        return 0.0
    intersection = len(s.intersection(d))

    return intersection / union


def elementwise_jaccard_distance(s: str, l: List[str]) -> List[float]:
    """
    Calculate the Jaccard distance between a string and each element in a list of strings.
    """
    return [jaccard_distance(s, element) for element in l]


def find_typos_and_guesses(
    user_inputs: List[str], valid_inputs: List[str], match_threshold: float = 0.5
) -> Tuple[Union[str, None], Union[str, None]]:
    """
    Find the best matching suggestion from a list of valid inputs for a list of invalid user inputs.

    Parameters
    ----------
    user_inputs : list of str
        The list of invalid user inputs.
    valid_inputs : list of str
        The list of valid inputs.
    match_threshold : float, optional
        The minimum Jaccard distance required to consider a user input a typo.

    Returns
    -------
    tuple of (str or None, str or None)
        The best matching valid input and the user input that may be a typo, or (None, None) when
        nothing is above the match threshold.
    """
    if not user_inputs or not valid_inputs:
        return None, None

    best_guess = max(valid_inputs, key=lambda x: max(elementwise_jaccard_distance(x, user_inputs)))
    maybe_typo = max(user_inputs, key=lambda x: max(elementwise_jaccard_distance(x, valid_inputs)))

    if jaccard_distance(best_guess, maybe_typo) < match_threshold:
        return None, None

    return best_guess, maybe_typo


def suggest_spec(spec: str, keywords: List[str]) -> Optional[str]:
    """
    Suggest a corrected spec string by replacing its leading keyword with the closest valid one.

    Only the text before the first ':' is compared, so "goldne" suggests "golden" and
    "clasical:0.5" suggests "classical:0.5".
    """
    head, sep, rest = spec.strip().partition(":")
    if head in keywords:
        return None

    best_guess, _ = find_typos_and_guesses([head.lower()], keywords)
    if best_guess is None:
        return None
    return best_guess + sep + rest


def validate_window_bounds(start: int, stop: int, minimum: int = 1) -> None:
    """Raise ``EmptyWindowError`` for reversed windows and ``ValueError`` below ``minimum``."""
    if stop < start:
        raise EmptyWindowError(f"{start}..{stop}")
    if start < minimum:
        raise ValueError(f"Index windows start at {minimum} or later, found {start}..{stop}")
