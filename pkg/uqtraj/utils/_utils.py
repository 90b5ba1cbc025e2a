# Copyright (c) 2023 uqtraj developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of
# this software and associated documentation files (the "Software"), to deal in
# the Software without restriction, including without limitation the rights to
# use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of
# the Software, and to permit persons to whom the Software is furnished to do so,
# subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS
# FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR
# COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER
# IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN
# CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.


import numpy as np

from uqtraj.utils.exceptions import InvalidArgument


def assure_list_of_strings(variable, variable_name):
    """
    Make sure object is a list of strings.
    """
    if isinstance(variable, (list, tuple)):
        return list(variable)
    elif isinstance(variable, str):
        return [variable]
    else:
        raise InvalidArgument(f"{variable_name} needs to be either a string or list of strings.")


def assure_list_values_allowed(variable, variable_name, allowed_values):
    """
    Assert that every value of a list is one of the allowed values.
    """
    for value in variable:
        if value not in allowed_values:
            raise InvalidArgument(
                f"Value {value} in variable {variable_name} is not allowed. Allowed values: {list(allowed_values)}"
            )


def assure_generator(random_state):
    """
    Turns an int seed, None or a numpy Generator into a numpy Generator.
    """
    if isinstance(random_state, np.random.Generator):
        return random_state
    return np.random.default_rng(random_state)


def spawn_seeds(random_state, n):
    """
    Derives n independent integer seeds from a parent seed.

    The derived seeds depend only on the parent seed and n, so work items can be distributed over processes
    without changing results.

    Args:
        random_state (int or None): Parent seed.
        n (int): Number of seeds.

    Returns:
        (list of int): Derived seeds.
    """
    children = np.random.SeedSequence(random_state).spawn(n)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]
