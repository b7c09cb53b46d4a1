"""
Exceptions raised by paramcaption. Everything derives from ValueError so callers that only care
about bad input can keep catching that.
"""

class ParamCaptionError(ValueError):
    pass

class SchemaError(ParamCaptionError):
    """A caption, annotation or edit document does not follow the schema.

    Params:
        path: Location of the problem inside the document, e.g. 'objects[0].box'.
        message: What is wrong there.
        violations: Every violation found, when more than one was collected.
    """
    def __init__(self, path, message, violations=None):
        super().__init__('%s: %s' % (path, message))
        self.path = path
        self.message = message
        self.violations = list(violations) if violations else []

class EditError(ParamCaptionError):
    def __init__(self, message, index=None):
        if index is not None:
            message = 'edit %d: %s' % (index, message)
        super().__init__(message)
        self.index = index

class EnrichError(ParamCaptionError):
    def __init__(self, object_id, message):
        super().__init__('%s: %s' % (object_id, message))
        self.object_id = object_id

class EvaluationError(ParamCaptionError):
    pass

class EmptyForegroundError(EvaluationError):
    """The foreground mask of a color case has no pixels left."""

class RenderError(ParamCaptionError):
    pass
