"""
Rank certificate data class
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from models.errors import ValidationError
from models.tensor import Decomposition


@dataclass
class RankCertificate:
    """Sandwich lower <= R(T) <= upper with the evidence for both sides"""

    lower: int
    lower_witness: str
    upper: Optional[int] = None
    upper_witness: Optional[Decomposition] = None
    flags: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper:
            raise ValidationError(
                f"unsound certificate: lower {self.lower} > upper {self.upper}"
            )
        if self.upper_witness is not None and len(self.upper_witness) != self.upper:
            raise ValidationError("upper bound must equal the witness term count")

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower == self.upper

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary format"""
        result: Dict[str, Any] = {
            "lower": self.lower,
            "lower_witness": self.lower_witness,
            "upper": self.upper,
            "exact": self.exact,
            "flags": list(self.flags),
        }
        if self.upper_witness is not None:
            result["witness"] = self.upper_witness.to_dict()
        return result
