# -*- coding: UTF-8 -*-
"""
Module providing package wide Exceptions
"""

from typing import List


class DomainException(Exception):
    """
    Should be raised, if a value lies outside the physical domain of an operation (e.g. a domain wall position outside
    the track or a target conductance outside the MTJ range).

    :param msg: detailed error message
    """

    def __init__(self, msg: str) -> None:
        super().__init__(msg)
        self.message = str(msg)

    def __str__(self) -> str:
        return self.message


class ConfigException(Exception):
    """
    Should be raised, if a configuration or simulation parameter is invalid. All detected problems are collected in
    :attr:`errors`, each one prefixed with the key path of the offending value.

    :param msg: detailed error message or list of error messages
    """

    def __init__(self, msg: str or List[str]) -> None:
        super().__init__(msg)
        if isinstance(msg, (list, tuple)):
            self.errors = [str(x) for x in msg]
        else:
            self.errors = [str(msg)]
        self.message = "\n".join(self.errors)

    def __str__(self) -> str:
        return self.message


class NumericalException(Exception):
    """
    Should be raised, if a numerical procedure fails (e.g. a singular nodal system)

    :param msg: detailed error message
    """

    def __init__(self, msg: str) -> None:
        super().__init__(msg)
        self.message = str(msg)

    def __str__(self) -> str:
        return self.message


class UnsupportedConfigurationException(Exception):
    """
    Should be raised, if a device configuration has no exact reduction to the abstract integrate-and-fire model

    :param msg: detailed error message
    """

    def __init__(self, msg: str) -> None:
        super().__init__(msg)
        self.message = str(msg)

    def __str__(self) -> str:
        return self.message


class DatabaseException(Exception):
    """
    Should be raised, if an unresolved database issue occurred (e.g. more than one value in a unique column)

    :param msg: detailed error message
    """

    def __init__(self, msg: str) -> None:
        super().__init__(msg)
        self.message = str(msg)

    def __str__(self) -> str:
        return self.message


class DatabaseRequestException(Exception):
    """
    Should be raised, if an error occurs during a database request (e.g. not the expected result)

    :param msg: detailed error message
    """

    def __init__(self, msg: str) -> None:
        super().__init__(msg)
        self.message = str(msg)

    def __str__(self) -> str:
        return self.message
