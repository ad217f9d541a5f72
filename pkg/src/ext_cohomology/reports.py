from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import pandas as pd


@dataclass
class BigradedCohomologyReport:
    """Dimensions per (degree, weight) plus named verification verdicts"""
    label: str
    dims: Dict[Tuple[int, int], int] = field(default_factory=dict)
    verdicts: Dict[str, bool] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def dim(self, degree: int, weight: int) -> int:
        return self.dims.get((degree, weight), 0)

    def nonzero(self) -> Dict[Tuple[int, int], int]:
        return {k: v for k, v in sorted(self.dims.items()) if v}

    def failed(self) -> List[str]:
        return [name for name, ok in self.verdicts.items() if not ok]

    def to_frame(self) -> pd.DataFrame:
        records = [{'degree': d, 'weight': w, 'dim': n} for (d, w), n in sorted(self.dims.items())]
        if not records:
            return pd.DataFrame(columns=['degree', 'weight', 'dim'])
        return pd.DataFrame(records).pivot_table(index='weight', columns='degree', values='dim',
                                                 fill_value=0, aggfunc='sum')

    def summary(self) -> Dict:
        return {
            'label': self.label,
            'dims': {f"{d},{w}": n for (d, w), n in sorted(self.dims.items()) if n},
            'verdicts': dict(self.verdicts),
            'notes': list(self.notes),
        }
