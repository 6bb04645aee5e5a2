import sys
import time
import logging

__all__ = [
    "ProgressBar",
    "get_logger",
    "error_callback",
]

LOG_FORMAT = "%(asctime)-15s [%(levelname)-5s] %(message)s"
LOG_DATEFMT = "[%a %Y-%m-%d %H:%M:%S]"


class ProgressBar(object):
    """A simple progress bar with date stamp, counting finished segments"""

    def __init__(self, width=50, total=100, label=""):
        """Init the ProgressBar object

        Args:
            width (int, optional): The width of progress bar. Defaults to 50.
            total (int, optional): The total jobs of progress bar. Defaults to 100.
            label (str, optional): Text printed in front of the bar. Defaults to "".
        """
        self.last_x = -1
        self.width = width
        self.total = max(int(total), 1)
        self.label = label
        self.processed = 0

    def update(self, x, force=False):
        """Update progress bar

        Args:
            x (float): The percentage of progress in [0, 100], if x equals input from the last time, the progress bar will not be updated
            force (bool, optional): Redraw even if the percentage did not change
        """
        x = min(100, x)
        assert 0 <= x <= 100
        if self.last_x == int(x) and force is not True:
            return
        self.last_x = int(x)
        p = int(self.width * (x / 100.0))
        time_stamp = time.strftime(LOG_DATEFMT, time.localtime())
        sys.stderr.write('\r%s %s[%-5s] [%s]' % (time_stamp, self.label, str(int(x)) + '%', '#' * p + '.' * (self.width - p)))
        sys.stderr.flush()

    def process(self, x=1):
        """Update progress bar using processed jobs

        Args:
            x (int): The number of jobs recently finished
        """
        self.processed += x
        self.update(100 * self.processed / self.total)

    def close(self):
        """Finish progress bar and print new line"""
        self.update(100, force=True)
        sys.stderr.write('\n')


def get_logger(logger_name='goddard_id', fname=None, verbosity=False):
    """Configure the package logger

    Calling it again replaces the handlers of the previous call.

    Args:
        logger_name (str, optional): Name of logger. Defaults to 'goddard_id'.
        fname (str, optional): Path of log file. Defaults to None (console only).
        verbosity (bool, optional): Log DEBUG messages. Defaults to False.

    Returns:
        logging.Logger: configured logger
    """
    logger = logging.getLogger(logger_name)
    logger.setLevel(logging.DEBUG)
    level = logging.DEBUG if verbosity else logging.INFO
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT, LOG_DATEFMT)

    # LOG file
    if fname is not None:
        file_handler = logging.FileHandler(fname, mode='w')
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    # LOG console
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    return logger


def error_callback(e):
    """Error callback functions for multiprocessing Pool

    Args:
        e (Exception): Exception caught in processes
    """
    logging.getLogger('goddard_id').error(f"Error in worker process: {e!r}")
