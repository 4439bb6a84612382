"""results_db_initialization

Revision ID: 5b1d7c3a9e42
Revises: 
Create Date: 2026-10-16 10:12:41.318204

"""
from alembic import op
import sqlalchemy as sq


# revision identifiers, used by Alembic.
revision = '5b1d7c3a9e42'
down_revision = None
branch_labels = None
depends_on = None


def upgrade():
    # ### commands auto generated by Alembic - please adjust! ###
    op.create_table('simulation_runs',
    sq.Column('name_col', sq.VARCHAR(length=100), nullable=True),
    sq.Column('comment_col', sq.VARCHAR(length=100), nullable=True),
    sq.Column('id', sq.INTEGER(), nullable=False),
    sq.Column('command', sq.VARCHAR(length=50), nullable=True),
    sq.Column('dt', sq.FLOAT(), nullable=True),
    sq.Column('t_end', sq.FLOAT(), nullable=True),
    sq.Column('config_json', sq.TEXT(), nullable=True),
    sq.Column('spike_count', sq.INTEGER(), nullable=True),
    sq.PrimaryKeyConstraint('id')
    )
    op.create_table('spike_records',
    sq.Column('name_col', sq.VARCHAR(length=100), nullable=True),
    sq.Column('comment_col', sq.VARCHAR(length=100), nullable=True),
    sq.Column('id', sq.INTEGER(), nullable=False),
    sq.Column('layer_index', sq.INTEGER(), nullable=True),
    sq.Column('neuron_index', sq.INTEGER(), nullable=True),
    sq.Column('fire_time', sq.FLOAT(), nullable=True),
    sq.Column('run_id', sq.INTEGER(), nullable=True),
    sq.ForeignKeyConstraint(['run_id'], ['simulation_runs.id'], ),
    sq.PrimaryKeyConstraint('id')
    )
    op.create_index('spike_run_time_index', 'spike_records', ['run_id', 'fire_time'], unique=False)
    # ### end Alembic commands ###


def downgrade():
    # ### commands auto generated by Alembic - please adjust! ###
    op.drop_index('spike_run_time_index', table_name='spike_records')
    op.drop_table('spike_records')
    op.drop_table('simulation_runs')
    # ### end Alembic commands ###
