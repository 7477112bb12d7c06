import pandas
from packaging import version

# DataFrame.to_csv renamed ``line_terminator`` to ``lineterminator`` in 1.5
PANDAS_15 = version.parse(pandas.__version__) >= version.parse("1.5")
CSV_LINE_TERMINATOR_KW = "lineterminator" if PANDAS_15 else "line_terminator"
