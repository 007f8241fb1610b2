class ExportError(Exception):
    """Bad input data, unavailable model, or unwritable output."""
