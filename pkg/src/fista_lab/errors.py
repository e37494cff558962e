class NumericalFailure(ArithmeticError):
    """A computation produced non-finite values or a factorization failed.

    ``iteration`` is set when the failure happened inside a solver loop.
    """

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration
