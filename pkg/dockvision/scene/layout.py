import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from dockvision.types import FloatArray


class LandmarkLayout(BaseModel):
    """
    Landmarks mounted uniformly on a circle around the reference origin, coplanar on
     z_r = 0. Index k sits at angle 2*pi*k/count from the +x_r axis towards +y_r.
    """

    count: int = Field(8, ge=4, description="Number of landmarks on the ring.")
    radius_mm: float = Field(
        600.0, gt=0, description="Ring radius in mm (1200 mm outer diameter)."
    )

    model_config = ConfigDict(extra='forbid', validate_assignment=True, frozen=True)

    @property
    def angles(self) -> FloatArray:
        return 2.0 * np.pi * np.arange(self.count) / self.count

    @property
    def points(self) -> FloatArray:
        """(count, 3) reference frame coordinates in mm."""
        return np.column_stack(
            [
                self.radius_mm * np.cos(self.angles),
                self.radius_mm * np.sin(self.angles),
                np.zeros(self.count),
            ]
        )
