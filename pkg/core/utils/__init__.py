"""
Initialization module for helper classes and their methods.
"""


from .file_utils import FileUtils
from .seed_utils import SeedUtils
from .type_utils import coerce, resolve_type
