from fdrelay.cli import main
import sys

sys.exit(main())
