import logging
import math
from core.config import settings
from core.errors import BudgetExceededError

logger = logging.getLogger(__name__)

def guard_candidates(count: int, what: str) -> int:
    if count > settings.max_candidates:
        logger.warning(f"Budget exceeded for {what}: {count} candidates")
        raise BudgetExceededError(what, count, settings.max_candidates)
    return count

def table_bits(positions: int, codomain_size: int) -> float:
    return positions * math.log2(codomain_size) if codomain_size > 1 else 0.0

def guard_table_bits(positions: int, codomain_size: int, what: str) -> float:
    bits = table_bits(positions, codomain_size)
    if positions > 2 ** settings.max_table_bits or bits > settings.max_table_bits:
        logger.warning(f"Budget exceeded for {what}: {bits:.2f} table bits over {positions} positions")
        raise BudgetExceededError(what, bits, settings.max_table_bits)
    return bits
