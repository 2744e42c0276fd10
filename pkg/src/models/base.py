"""Base schema class shared by the serializable value types."""
from typing import Any, Dict

import numpy as np
from pydantic import BaseModel, ConfigDict


class FrozenModel(BaseModel):
    """Immutable pydantic model with strict field handling."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    def to_dict(self) -> Dict[str, Any]:
        """Convert model instance to a JSON-compatible dictionary."""
        return self.model_dump(mode="json")

    def __repr__(self) -> str:
        fields = ", ".join(f"{k}={v!r}" for k, v in self.__dict__.items())
        return f"<{self.__class__.__name__}({fields})>"


def frozen_array(values: Any, dtype: Any = np.float64) -> np.ndarray:
    """Copy ``values`` into a read-only numpy array."""
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array
