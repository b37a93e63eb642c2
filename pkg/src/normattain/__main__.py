"""Allow running normattain as a module: python -m normattain"""

import sys

from normattain.cli import main

sys.exit(main())
