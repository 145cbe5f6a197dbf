"""DropClause package exports."""

from .booleanize import __all__ as _booleanize_all
from .cli import __all__ as _cli_all
from .conv_tm import __all__ as _conv_tm_all
from .drop_clause import __all__ as _drop_clause_all
from .eval_harness import __all__ as _eval_harness_all
from .interpret import __all__ as _interpret_all
from .tm_core import __all__ as _tm_core_all

__version__ = "0.1.0"

__all__ = [
    *_booleanize_all,
    *_cli_all,
    *_conv_tm_all,
    *_drop_clause_all,
    *_eval_harness_all,
    *_interpret_all,
    *_tm_core_all,
]
