"""Functions for dealing with input/output files"""
import os
import shutil
import logging
from contextlib import contextmanager
from pathlib import Path

from goddard_id.errors import FileConflictError
from .text import generate_random_key

__all__ = [
    "check_file",
    "check_dir",
    "staged_outputs",
]

logger = logging.getLogger(__name__)


def check_file(file_name):
    """Check is a file exist

    Args:
        file_name (str): query file

    Returns:
        file_path: absolute path of input file
    """
    if os.path.exists(file_name) and os.path.isfile(file_name):
        return os.path.abspath(file_name)
    else:
        raise FileNotFoundError(f'{file_name} not found')


def check_dir(dir_name):
    """Check if a directory exist, create if not exist

    Args:
        dir_name (str): query directory

    Returns:
        dir_path: absolution path of directory
    """
    if os.path.exists(dir_name):
        if not os.path.isdir(dir_name):
            raise FileConflictError(f'Directory: {dir_name} conflict with existed files')
    else:
        os.makedirs(dir_name)
    return os.path.abspath(dir_name)


class _Stage(object):
    """Temporary paths handed out by staged_outputs"""

    def __init__(self, out_dir, tmp_dir):
        self.out_dir = Path(out_dir)
        self.tmp_dir = Path(tmp_dir)
        self.staged = []

    def path(self, file_name):
        """Temporary path that becomes out_dir / file_name on success"""
        tmp = self.tmp_dir / f".{file_name}.{generate_random_key(8)}.tmp"
        self.staged.append((tmp, self.out_dir / file_name))
        return tmp


@contextmanager
def staged_outputs(out_dir):
    """Write files under temporary names and move them in place only if every write succeeded

    Temporary files go to GODDARD_ID_TMP_DIR if set, otherwise to out_dir.

    Args:
        out_dir (str): output directory, created if missing

    Yields:
        _Stage: use stage.path(name) as the target of each write
    """
    out_dir = check_dir(out_dir)
    tmp_dir = check_dir(os.environ['GODDARD_ID_TMP_DIR']) if 'GODDARD_ID_TMP_DIR' in os.environ else out_dir
    stage = _Stage(out_dir, tmp_dir)
    try:
        yield stage
    except BaseException:
        for tmp, _ in stage.staged:
            if tmp.exists():
                tmp.unlink()
        raise
    for tmp, final in stage.staged:
        if tmp_dir == out_dir:
            os.replace(tmp, final)
        else:
            shutil.move(str(tmp), str(final))
        logger.debug(f"Wrote {final}")
