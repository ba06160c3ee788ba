"""Wang tiles and the staged reduction from periodic tiling to pathograph realization."""
