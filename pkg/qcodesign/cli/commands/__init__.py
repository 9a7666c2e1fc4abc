"""
One module per qcodesign command
"""
