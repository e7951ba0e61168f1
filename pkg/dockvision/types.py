from typing import Annotated, Literal

import numpy as np
import numpy.typing as npt

# Bumped whenever a manifest / checkpoint / report layout changes.
SCHEMA_VERSION = 1

FloatArray = npt.NDArray[np.float64]

ColorSpace = Literal['RGB', 'HSV', 'GRAY']
SampleLabel = Literal['foreground', 'background']

BoxType = Annotated[
    tuple[float, float, float, float],
    "axis aligned box as (x, y, w, h), x/y being the top left corner",
]
PixelType = Annotated[tuple[float, float], "image point (u, v) in pixels"]
