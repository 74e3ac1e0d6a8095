"""Wrist-sensor analytics for archery training.

Two pipelines share one toolkit: accelerometer windows feed a recurrent motion
detector that finds draw-to-release events in a session stream, and pulse-wave
inter-beat intervals feed an eleven-feature variability bank whose vectors a
small feed-forward net classifies into low/high self-reported stress.
"""

__version__ = "0.1.0"
