# -*- coding: UTF-8 -*-
"""
This module provides classes for storing simulation runs and their fire events in the results database.
"""

import json
import sqlalchemy as sq

from sqlalchemy.orm import relationship
from sqlalchemy.orm.session import Session
from typing import List

from dwmtj_toolbox.db_handler import AbstractDBObject, Base
from dwmtj_toolbox.network import SimTrace
from dwmtj_toolbox.neurons import FireEvent


class SpikeRecord(Base, AbstractDBObject):
    """
    A single fire event of a stored simulation run

    :param layer: layer index of the firing neuron
    :param neuron: index of the neuron inside the layer
    :param fire_time_s: time of the fire event
    """
    __tablename__ = "spike_records"

    id = sq.Column(sq.INTEGER, sq.Sequence("spike_records_id_seq"), primary_key=True)
    layer_index = sq.Column(sq.INTEGER)
    neuron_index = sq.Column(sq.INTEGER)
    fire_time = sq.Column(sq.FLOAT)

    run_id = sq.Column(sq.INTEGER, sq.ForeignKey("simulation_runs.id"))

    sq.Index("spike_run_time_index", run_id, fire_time)

    def __init__(self, layer: int, neuron: int, fire_time_s: float, *args, **kwargs) -> None:
        AbstractDBObject.__init__(self, *args, **kwargs)
        self.layer_index = int(layer)
        self.neuron_index = int(neuron)
        self.fire_time = float(fire_time_s)

    def __repr__(self) -> str:
        return "<SpikeRecord(id='{}', layer='{}', neuron='{}', fire_time='{}')>". \
            format(self.id, self.layer_index, self.neuron_index, self.fire_time)

    def to_event(self) -> FireEvent:
        """
        Returns the record as :class:`FireEvent`
        """
        return FireEvent(self.fire_time, self.layer_index, self.neuron_index)


class SimulationRun(Base, AbstractDBObject):
    """
    A stored simulation run with its normalised configuration and all fire events

    :param command: CLI command which produced the run
    :param dt_s: time step of the run
    :param t_end_s: simulated time
    :param config_json: normalised experiment configuration as JSON
    :raises ValueError: if config_json is not valid JSON
    """
    __tablename__ = "simulation_runs"
    __allow_unmapped__ = True

    id = sq.Column(sq.INTEGER, sq.Sequence("simulation_runs_id_seq"), primary_key=True)
    command = sq.Column(sq.VARCHAR(50))
    dt = sq.Column(sq.FLOAT)
    t_end = sq.Column(sq.FLOAT)
    config_json = sq.Column(sq.TEXT)
    spike_count = sq.Column(sq.INTEGER, default=0)

    spikes: List[SpikeRecord] = relationship("SpikeRecord", order_by=(SpikeRecord.fire_time, SpikeRecord.layer_index,
                                                                     SpikeRecord.neuron_index),
                                             backref="run", cascade="all, delete, delete-orphan")

    def __init__(self, command: str, dt_s: float, t_end_s: float, config_json: str, *args, **kwargs) -> None:
        AbstractDBObject.__init__(self, *args, **kwargs)
        json.loads(config_json)
        self.command = str(command)[:50]
        self.dt = float(dt_s)
        self.t_end = float(t_end_s)
        self.config_json = config_json
        self.spike_count = 0

    def __repr__(self) -> str:
        return "<SimulationRun(id='{}', command='{}', dt='{}', t_end='{}', spike_count='{}')>". \
            format(self.id, self.command, self.dt, self.t_end, self.spike_count)

    def __str__(self) -> str:
        return "[{}] {}: {} spikes in {} s".format(self.id, self.command, self.spike_count, self.t_end)

    @classmethod
    def from_trace(cls, command: str, dt_s: float, t_end_s: float, config_json: str, trace: SimTrace,
                   session: Session, name: str = "", comment: str = "") -> "SimulationRun":
        """
        Creates a run including a spike record for every fire event of the trace. The run is not saved.

        :param command: CLI command which produced the run
        :param dt_s: time step of the run
        :param t_end_s: simulated time
        :param config_json: normalised experiment configuration
        :param trace: trace of the run
        :param session: SQLAlchemy session
        :param name: name of the run
        :param comment: additional comment
        :return: the new run
        """
        run = cls(command, dt_s, t_end_s, config_json, session, name, comment)
        for event in trace.events:
            run.spikes.append(SpikeRecord(event.layer, event.neuron, event.time_s, session))
        run.spike_count = len(run.spikes)
        return run

    @property
    def config(self) -> dict:
        """
        the stored configuration as dictionary
        """
        return json.loads(self.config_json)

    def events(self) -> List[FireEvent]:
        """
        Returns all stored fire events in time order
        """
        return [spike.to_event() for spike in self.spikes]

    def spike_times(self, layer: int = 0, neuron: int = 0) -> List[float]:
        """
        Returns the fire times of a single neuron in time order

        :param layer: layer index
        :param neuron: neuron index
        :return: list of fire times
        """
        return [spike.fire_time for spike in self.spikes if spike.layer_index == layer and spike.neuron_index == neuron]

    @classmethod
    def load_by_command_from_db(cls, command: str, session: Session) -> List["SimulationRun"]:
        """
        Returns all runs created by the given CLI command

        :param command: CLI command
        :param session: represents the database connection as SQLAlchemy Session
        :return: a list of runs
        :raises TypeError: if session is not of type SQLAlchemy Session
        """
        return cls._load(session, cls.command == command)
