import csv
import io

from rest_framework.renderers import BaseRenderer

SIGNIFICANT_DIGITS = 17


def format_cell(value) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format(value, f'.{SIGNIFICANT_DIGITS}g')
    if value is None:
        return ''
    return str(value)


class CSVRenderer(BaseRenderer):
    """
    Render a list of row dicts as CSV

    Floats carry 17 significant digits so that identical inputs give
    byte-identical files. The header comes from ``renderer_context['header']``
    when given (so an empty table still has one), else from the first row.
    """

    media_type = 'text/csv'
    format = 'csv'
    charset = 'utf-8'

    def render(self, data, accepted_media_type=None, renderer_context=None):
        renderer_context = renderer_context or {}
        rows = list(data or [])
        header = renderer_context.get('header')
        if header is None:
            header = list(rows[0].keys()) if rows else []

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(row.get(column)) for column in header])
        return buffer.getvalue().encode(self.charset)
