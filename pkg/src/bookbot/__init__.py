"""Simulated IoT book-collection bot: codecs, sensors, teleop and circulation."""

__version__ = "0.1.0"
