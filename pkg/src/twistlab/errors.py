class BudgetExceeded(RuntimeError):
    """An enumeration would need more items than its budget allows."""

    def __init__(self, needed: int, budget: int, what: str = "items"):
        super().__init__(f"needs {needed} {what}, budget is {budget}")
        self.needed = needed
        self.budget = budget
