"""PV-plant digital twin and intraday market operations engine."""

__version__ = "0.1.0"

from .plant import (ArrayConfig, ConversionUnit, Inverter, Location, Panel,
                    PlantSystem, StringBox, ThermalParams, Tracker,
                    elpaso_architecture, enumerate_arrays,
                    parse_plant_architecture, validate_system)
from .power import simulate_plant
from .qc import ForecastSeries, WeatherSeries

__all__ = [
    "ArrayConfig", "ConversionUnit", "ForecastSeries", "Inverter", "Location",
    "Panel", "PlantSystem", "StringBox", "ThermalParams", "Tracker",
    "WeatherSeries", "elpaso_architecture", "enumerate_arrays",
    "parse_plant_architecture", "simulate_plant", "validate_system",
]
