# -*- coding: UTF-8 -*-
"""
Providing the DBHandler class for access to the results database through a SQLAlchemy session and the
AbstractDBObject base class for all stored classes.
"""

import logging
import os
import sqlalchemy as sq

from alembic import command, script
from alembic.config import Config
from alembic.runtime import migration
from sqlalchemy.exc import IntegrityError
from sqlalchemy.orm import declarative_base, sessionmaker
from sqlalchemy.orm.session import Session
from typing import List, Optional

from dwmtj_toolbox.exceptions import DatabaseException, DatabaseRequestException

Base = declarative_base()

logger = logging.getLogger(__name__)

_package_dir = os.path.dirname(os.path.abspath(__file__))


def _alembic_config(connection: Optional[str] = None) -> Config:
    """
    Returns the alembic configuration of the package. Alembic resolves the script location relative to the current
    folder, therefore the location is replaced by its absolute path.

    :param connection: optional database url
    :return: alembic configuration
    """
    alembic_cfg = Config(os.path.join(_package_dir, "alembic.ini"))
    alembic_cfg.set_main_option(
        "script_location",
        os.path.join(_package_dir, alembic_cfg.get_main_option("script_location", "alembic"))
    )
    if connection is not None:
        alembic_cfg.set_main_option("sqlalchemy.url", connection)
    alembic_cfg.attributes["configure_logger"] = False
    return alembic_cfg


class DBHandler(object):
    """
    A class for database access through an SQLAlchemy session. File databases are migrated to the current schema on
    opening, in-memory databases are created directly from the ORM metadata. Additional arguments are piped to
    :meth:`sqlalchemy.create_engine`

    :param connection: Connection uri to a database, format defined by SQLAlchemy
    :return: Nothing
    """

    def __init__(self, connection: str = "sqlite:///:memory:", *args, **kwargs) -> None:
        """
        Initialize a new database connection via SQLAlchemy
        """
        # register all tables at the metadata
        from dwmtj_toolbox import runs  # noqa: F401

        self.__connection = connection
        self.__engine = sq.create_engine(self.__connection, *args, **kwargs)
        self.__last_session = None

        in_memory = self.__connection in ["sqlite://", "sqlite:///:memory:"]
        if in_memory:
            Base.metadata.create_all(self.__engine)
        elif not self.check_current_head():
            self.start_db_migration()

        self.__sessionmaker = sessionmaker(bind=self.__engine)
        self.create_new_session()

    def __repr__(self) -> str:
        return "<DBHandler(connection='{}')>".format(self.__connection)

    def check_current_head(self) -> bool:
        """
        Checks if the selected database schema version matches the python source ORM schema version.
        If false please run start_db_migration to update the database.

        :return: True if both version are matching, else False
        """
        directory = script.ScriptDirectory.from_config(_alembic_config())
        with self.__engine.begin() as connection:
            context = migration.MigrationContext.configure(connection)
            return set(context.get_current_heads()) == set(directory.get_heads())

    def start_db_migration(self) -> None:
        """
        Runs alembic to upgrade the selected database to the current revision head. This ensures that the database
        schema version matches the python ORM version.

        :return: Nothing
        :raises DatabaseException: if the migration fails
        """
        self.close_last_session()
        logger.info("migrating results database %s", self.__connection)
        try:
            command.upgrade(_alembic_config(self.__connection), "head")
        except Exception as e:
            raise DatabaseException("migration of {} failed: {}".format(self.__connection, e))

    def create_new_session(self) -> Session:
        """
        Creates and returns a new session object

        :return: returns a newly created session object
        """
        self.__last_session = self.__sessionmaker()
        return self.__last_session

    def get_session(self) -> Session:
        """
        Returns the session object for the current database connection

        :return: Returns the session object for the current database connection
        """
        if self.__last_session is None:
            return self.create_new_session()
        return self.__last_session

    def close_last_session(self) -> None:
        """
        Close the actual session

        :return: Nothing
        """
        if self.__last_session is not None:
            self.__last_session.close()
            self.__last_session = None


def _checked_session(session: Session) -> Session:
    """
    returns session, if it is a SQLAlchemy Session

    :raises TypeError: if session is not of type SQLAlchemy Session
    """
    if not isinstance(session, Session):
        raise TypeError("'session' is not of type SQLAlchemy Session (it is {})!".format(type(session)))
    return session


class AbstractDBObject(object):
    """
    Base of the stored result classes, providing a name, a comment and the session handling. No object should be
    created directly!

    :param session: session object create by SQLAlchemy sessionmaker
    :param name: used to group runs by name
    :param comment: additional comment
    :raises TypeError: if session is not of type SQLAlchemy Session
    """

    id = None
    name_col = sq.Column(sq.VARCHAR(100), default="")
    comment_col = sq.Column(sq.VARCHAR(100), default="")

    def __init__(self, session: Session, name: str = "", comment: str = "") -> None:
        self.session = session
        self.name = name
        self.comment = comment

    @property
    def name(self) -> str:
        """
        The name of the object, cut to 100 characters
        """
        return self.name_col

    @name.setter
    def name(self, new_name: str) -> None:
        self.name_col = str(new_name)[:100]

    @property
    def comment(self) -> str:
        """
        The additional comment, cut to 100 characters
        """
        return self.comment_col

    @comment.setter
    def comment(self, comment: str) -> None:
        self.comment_col = str(comment)[:100]

    @property
    def session(self) -> Session:
        """
        The session the object is stored with. Objects loaded from the database get the loading session.

        :raises TypeError: if session is not of type SQLAlchemy Session
        """
        return self.__session

    @session.setter
    def session(self, session: Session) -> None:
        self.__session = _checked_session(session)

    def save_to_db(self) -> None:
        """
        Saves the object and all attached records to the database

        :return: Nothing
        :raises DatabaseException: if the commit to the database fails, all changes are rolled back
        """
        self.__session.add(self)
        try:
            self.__session.commit()
        except IntegrityError as e:
            self.__session.rollback()
            raise DatabaseException("Cannot commit changes, integrity error ({}) - rolled back".format(e.orig))

    @classmethod
    def delete_from_db(cls, obj: "AbstractDBObject", session: Session) -> None:
        """
        Deletes an object from the database, attached records follow the cascade of the relationship
        """
        session = _checked_session(session)
        session.delete(obj)
        session.commit()

    @classmethod
    def _load(cls, session: Session, *criteria) -> List["AbstractDBObject"]:
        """
        returns all objects matching the criteria in id order, attached to session
        """
        result = _checked_session(session).query(cls).filter(*criteria).order_by(cls.id).all()
        for obj in result:
            obj.session = session
        return result

    @classmethod
    def load_all_from_db(cls, session: Session) -> List["AbstractDBObject"]:
        """
        Returns all objects of this class in id order

        :param session: represents the database connection as SQLAlchemy Session
        :return: a list of objects
        :raises TypeError: if session is not of type SQLAlchemy Session
        """
        return cls._load(session)

    @classmethod
    def load_by_id_from_db(cls, _id: int, session: Session) -> "AbstractDBObject":
        """
        Returns the object with the given id

        :param _id: database id
        :param session: represents the database connection as SQLAlchemy Session
        :return: the object
        :raises DatabaseRequestException: if no object was found with this id
        :raises TypeError: if session is not of type SQLAlchemy Session
        """
        result = cls._load(session, cls.id == _id)
        if len(result) == 0:
            raise DatabaseRequestException("No {} found for ID {}".format(cls.__name__, _id))
        return result[0]

    @classmethod
    def load_by_name_from_db(cls, name: str, session: Session) -> List["AbstractDBObject"]:
        """
        Returns all objects with the given name in id order

        :param name: Only objects with this name will be returned
        :param session: represents the database connection as SQLAlchemy Session
        :return: a list of objects
        :raises TypeError: if session is not of type SQLAlchemy Session
        """
        return cls._load(session, cls.name_col == name)
