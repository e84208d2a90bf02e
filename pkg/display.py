import json
import logging
import os

import constants

logger = logging.getLogger(constants.TOOL_NAME)

PLOT_STUB = '''\
# Companion plotting stub for {csv_name}, written by {tool} {version}.
# Columns: {columns}
import matplotlib.pyplot as plt
import pandas as pd

frame = pd.read_csv({csv_name!r}, comment = '#')

fig, ax = plt.subplots()
for column in {y_columns!r}:
    ax.plot(frame[{x_column!r}], frame[column], label = column)
ax.set_xlabel({x_column!r})
ax.legend()
plt.show()
'''


def header_line(parameters):
    """
    The comment line that opens every CSV: tool, version and the parameter echo.
    """
    return f'# {constants.TOOL_NAME} {constants.VERSION} {json.dumps(parameters, sort_keys = True, separators = (",", ":"))}'


def write_csv(frame, parameters, stream):
    stream.write(header_line(parameters) + '\n')
    frame.to_csv(stream, float_format = '%.16g', index = False, lineterminator = '\n')


def write_json(frame, parameters, stream):
    document = {
        'tool': constants.TOOL_NAME,
        'version': constants.VERSION,
        'parameters': parameters,
        'rows': frame.to_dict(orient = 'records'),
    }
    json.dump(document, stream, indent = 2, sort_keys = True)
    stream.write('\n')


WRITERS = {
    'csv': write_csv,
    'json': write_json,
}


def write_table(frame, parameters, out, format, stdout):
    """
    Write a table to the file out, or to stdout when out is '-'.

    Returns the path written, or None for stdout.
    """

    writer = WRITERS[format]

    if out == '-':
        writer(frame, parameters, stdout)
        return None

    directory = os.path.dirname(out)
    if directory:
        os.makedirs(directory, exist_ok = True)

    with open(out, 'w', encoding = 'utf-8', newline = '') as f:
        writer(frame, parameters, f)

    logger.info(f'Wrote {len(frame)} rows to {out}.')
    return out


def table_path(directory, name, format):
    return os.path.join(directory, f'{name}.{format}')


def write_plot_stub(path, columns, x_column = 't'):
    """
    Write <name>_plot.py next to a data file, naming its columns.
    """

    stem, _ = os.path.splitext(path)
    stub_path = f'{stem}_plot.py'
    y_columns = [column for column in columns if column != x_column]

    with open(stub_path, 'w', encoding = 'utf-8', newline = '') as f:
        f.write(PLOT_STUB.format(
            csv_name = os.path.basename(path),
            tool = constants.TOOL_NAME,
            version = constants.VERSION,
            columns = ', '.join(columns),
            x_column = x_column,
            y_columns = y_columns,
        ))

    logger.info(f'Wrote plot stub {stub_path}.')
    return stub_path
