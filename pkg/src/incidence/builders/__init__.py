from .nerve import (FiniteCategorySpec, boolean_poset, chain_poset, divisor_poset,
                    free_monoidal_closure, monotone_surjection_category,
                    monotone_surjection_space, nerve_of_category, poset_category, poset_nerve)

__all__ = ["FiniteCategorySpec", "boolean_poset", "chain_poset", "divisor_poset",
           "free_monoidal_closure", "monotone_surjection_category",
           "monotone_surjection_space", "nerve_of_category", "poset_category", "poset_nerve"]
